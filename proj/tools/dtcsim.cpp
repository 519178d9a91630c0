// Command line front end: runs scenarios, reproduces the built-in figure
// suites, and evaluates metrics on stored traces. Exit code 0 on success,
// 2 on any configuration or usage problem.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtcsim/figures.hpp"
#include "dtcsim/metrics.hpp"
#include "dtcsim/scenario.hpp"
#include "dtcsim/simulation.hpp"
#include "dtcsim/trace_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dtcsim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;

void print_metrics(std::ostream& out, const Metrics& m) {
    out << "  rms_e_m                   " << format_g9(m.rms_e) << '\n'
        << "  max_abs_e_m               " << format_g9(m.max_abs_e) << '\n'
        << "  settle_time_s             " << format_g9(m.settle_time_s) << '\n'
        << "  reach_time_s              " << format_g9(m.reach_time_s) << '\n'
        << "  zero_crossings            " << m.zero_crossings << '\n'
        << "  oscillation_sustained     " << (m.oscillation_sustained ? "true" : "false") << '\n'
        << "  mean_abs_delta_rate_radps " << format_g9(m.mean_abs_delta_rate) << '\n';
}

void write_metrics_table(const fs::path& file,
                         const std::vector<std::pair<std::string, Metrics>>& rows) {
    std::ofstream out(file);
    if (!out) {
        throw std::runtime_error("cannot open metrics file for writing: " + file.string());
    }
    out << "run,rms_e_m,max_abs_e_m,settle_time_s,reach_time_s,zero_crossings,"
           "oscillation_sustained,mean_abs_delta_rate_radps\n";
    for (const auto& [label, m] : rows) {
        out << label << ',' << format_g9(m.rms_e) << ',' << format_g9(m.max_abs_e) << ','
            << format_g9(m.settle_time_s) << ',' << format_g9(m.reach_time_s) << ','
            << m.zero_crossings << ',' << (m.oscillation_sustained ? 1 : 0) << ','
            << format_g9(m.mean_abs_delta_rate) << '\n';
    }
}

/// Prediction-model path of a compensated run as its own small trace.
void write_model_path(const fs::path& file, const SimTrace& trace) {
    std::ofstream out(file);
    if (!out) {
        throw std::runtime_error("cannot open model path file for writing: " + file.string());
    }
    out << "t_s,x_m,y_m,psi_rad\n";
    for (const auto& row : trace.rows) {
        out << format_g9(row.t) << ',' << format_g9(row.model_pose.p.x) << ','
            << format_g9(row.model_pose.p.y) << ',' << format_g9(row.model_pose.psi) << '\n';
    }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool extended) {
    const ScenarioConfig config = load_scenario(config_path);
    validate_or_throw(config);
    const SimTrace trace = run_scenario(config);

    fs::create_directories(out_dir);
    const fs::path trace_file = fs::path(out_dir) / (config.name + ".csv");
    write_trace_csv(trace, trace_file.string(), extended);

    std::cout << config.name << ": " << trace.rows.size() << " rows -> " << trace_file.string()
              << '\n';
    print_metrics(std::cout, compute_metrics(trace));
    return kExitOk;
}

int cmd_figure(const std::string& figure, const std::string& out_dir) {
    const auto results = run_figure(figure);

    fs::create_directories(out_dir);
    std::vector<std::pair<std::string, Metrics>> table;
    for (const auto& [scenario, trace] : results) {
        const fs::path trace_file = fs::path(out_dir) / (scenario.label + ".csv");
        write_trace_csv(trace, trace_file.string());
        if (scenario.config.compensator.enabled) {
            write_model_path(fs::path(out_dir) / (scenario.label + "_model_path.csv"), trace);
        }
        const Metrics m = compute_metrics(trace);
        table.emplace_back(scenario.label, m);
        std::cout << scenario.label << '\n';
        print_metrics(std::cout, m);
    }

    const fs::path metrics_file = fs::path(out_dir) / (figure + "_metrics.csv");
    write_metrics_table(metrics_file, table);
    std::cout << "metrics table -> " << metrics_file.string() << '\n';
    return kExitOk;
}

int cmd_metrics(const std::string& trace_path, const MetricsParams& params) {
    const TraceTable table = read_trace_csv(trace_path);
    const Metrics m =
        compute_metrics(table.column("t_s"), table.column("e_m"), table.column("delta_cmd_rad"),
                        params);
    std::cout << trace_path << ": " << table.rows.size() << " rows\n";
    print_metrics(std::cout, m);
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig config = load_scenario(config_path);
    const auto errors = validate(config);
    if (!errors.empty()) {
        std::cerr << config_path << ": invalid\n";
        for (const auto& e : errors) {
            std::cerr << "  " << e << '\n';
        }
        return kExitConfig;
    }
    std::cout << scenario_to_json(config).dump(2) << '\n';
    std::cerr << config_path << ": valid\n";
    return kExitOk;
}

int cmd_defaults() {
    nlohmann::json j;
    j["default_scenario"] = scenario_to_json(ScenarioConfig{});
    j["figures"] = figure_names();
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_emit_scenarios(const std::string& out_dir) {
    fs::create_directories(out_dir);
    int count = 0;
    for (const auto& figure : figure_names()) {
        for (const auto& scenario : figure_scenarios(figure)) {
            const fs::path file = fs::path(out_dir) / (scenario.label + ".json");
            std::ofstream out(file);
            if (!out) {
                throw std::runtime_error("cannot write " + file.string());
            }
            out << scenario_to_json(scenario.config).dump(2) << '\n';
            ++count;
        }
    }
    std::cout << "wrote " << count << " scenario configs to " << out_dir << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dead-time compensated path tracking simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string trace_path;
    std::string figure;
    std::string out_dir = ".";
    bool extended = false;
    MetricsParams metrics_params;

    auto* run = app.add_subcommand("run", "Simulate a scenario config and write its trace CSV");
    run->add_option("config", config_path, "Scenario config (JSON, // comments allowed)")
        ->required();
    run->add_option("--out", out_dir, "Output directory (default: .)");
    run->add_flag("--extended", extended, "Append diagnostic columns to the trace");

    auto* fig = app.add_subcommand("figure", "Run a built-in experiment suite");
    fig->add_option("name", figure, "One of: fig3 fig4 fig8 fig10 fig11 fig12")->required();
    fig->add_option("--out", out_dir, "Output directory (default: .)");

    auto* met = app.add_subcommand("metrics", "Compute tracking metrics from a trace CSV");
    met->add_option("trace", trace_path, "Trace CSV with t_s, e_m, delta_cmd_rad columns")
        ->required();
    met->add_option("--eps-settle", metrics_params.eps_settle_m, "Settle band in m");
    met->add_option("--reach", metrics_params.reach_threshold_m, "Window-opening |e| in m");
    met->add_option("--window", metrics_params.window_s, "Window length in s");

    auto* val = app.add_subcommand("validate", "Check a config and print its normalized form");
    val->add_option("config", config_path, "Scenario config to check")->required();

    app.add_subcommand("defaults", "Print built-in parameters as JSON");

    auto* emit = app.add_subcommand("emit-scenarios",
                                    "Write every built-in figure scenario as a config file");
    emit->add_option("dir", out_dir, "Target directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, extended);
        }
        if (fig->parsed()) {
            return cmd_figure(figure, out_dir);
        }
        if (met->parsed()) {
            return cmd_metrics(trace_path, metrics_params);
        }
        if (val->parsed()) {
            return cmd_validate(config_path);
        }
        if (app.get_subcommand("defaults")->parsed()) {
            return cmd_defaults();
        }
        if (emit->parsed()) {
            return cmd_emit_scenarios(out_dir);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
