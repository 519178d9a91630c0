#pragma once

/**
 * @file metrics.hpp
 * @brief Scalar tracking metrics computed from a simulated or loaded trace.
 *
 * Error statistics are taken over an analysis window that opens when |e|
 * first drops below the reach threshold (the approach transient from an
 * offset start would otherwise dominate every run). If the threshold is
 * never reached the window is the whole trace, which is the right behaviour
 * for diverging runs. Settling is always judged against the full trace tail.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dtcsim/scenario.hpp"
#include "dtcsim/simulation.hpp"

namespace dtcsim {

struct Metrics {
    double rms_e = 0.0;
    double max_abs_e = 0.0;
    double settle_time_s = std::numeric_limits<double>::infinity();
    long zero_crossings = 0;
    bool oscillation_sustained = false;
    double mean_abs_delta_rate = 0.0;  // rad/s, over the full trace
    bool reached = false;
    double reach_time_s = std::numeric_limits<double>::infinity();
};

inline Metrics compute_metrics(const std::vector<double>& t, const std::vector<double>& e,
                               const std::vector<double>& delta_cmd, const MetricsParams& params) {
    const std::size_t n = t.size();
    if (n < 2 || e.size() != n || delta_cmd.size() != n) {
        throw std::invalid_argument("metrics need at least two aligned samples");
    }

    Metrics m;

    // Analysis window [begin, end).
    std::size_t begin = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(e[i]) < params.reach_threshold_m) {
            m.reached = true;
            m.reach_time_s = t[i];
            begin = i;
            break;
        }
    }
    std::size_t end = n;
    if (m.reached) {
        const double t_end = t[begin] + params.window_s;
        while (end > begin + 1 && t[end - 1] > t_end) {
            --end;
        }
    }

    double sum_sq = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        sum_sq += e[i] * e[i];
        m.max_abs_e = std::max(m.max_abs_e, std::abs(e[i]));
    }
    m.rms_e = std::sqrt(sum_sq / static_cast<double>(end - begin));

    // Settling: last trace sample outside the band decides it.
    std::size_t last_outside = 0;
    bool any_outside = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(e[i]) >= params.eps_settle_m) {
            last_outside = i;
            any_outside = true;
        }
    }
    if (!any_outside) {
        m.settle_time_s = t.front();
    } else if (last_outside + 1 < n) {
        m.settle_time_s = t[last_outside + 1];
    }

    // Zero crossings in the window; zero samples inherit the previous sign.
    std::vector<std::size_t> crossings;
    int prev_sign = 0;
    for (std::size_t i = begin; i < end; ++i) {
        const int sign = e[i] > 0.0 ? 1 : (e[i] < 0.0 ? -1 : 0);
        if (sign != 0) {
            if (prev_sign != 0 && sign != prev_sign) {
                crossings.push_back(i);
            }
            prev_sign = sign;
        }
    }
    m.zero_crossings = static_cast<long>(crossings.size());

    // Sustained oscillation: enough full lobes whose peaks neither fall
    // below the settle band nor decay past half the first lobe, with the
    // trace still active near the window end.
    if (crossings.size() >= 2) {
        std::vector<double> lobe_peaks;
        for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
            double peak = 0.0;
            for (std::size_t i = crossings[c]; i < crossings[c + 1]; ++i) {
                peak = std::max(peak, std::abs(e[i]));
            }
            lobe_peaks.push_back(peak);
        }
        std::vector<double> significant;
        for (const double peak : lobe_peaks) {
            if (peak >= params.eps_settle_m) {
                significant.push_back(peak);
            }
        }
        if (significant.size() >= 5) {
            bool held = true;
            for (const double peak : significant) {
                if (peak < 0.5 * significant.front()) {
                    held = false;
                    break;
                }
            }
            double tail_max = 0.0;
            const std::size_t tail_begin = begin + (end - begin) * 9 / 10;
            for (std::size_t i = tail_begin; i < end; ++i) {
                tail_max = std::max(tail_max, std::abs(e[i]));
            }
            m.oscillation_sustained = held && tail_max >= params.eps_settle_m;
        }
    }

    double rate_sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = t[i] - t[i - 1];
        if (dt > 0.0) {
            rate_sum += std::abs(delta_cmd[i] - delta_cmd[i - 1]) / dt;
        }
    }
    m.mean_abs_delta_rate = rate_sum / static_cast<double>(n - 1);

    return m;
}

inline Metrics compute_metrics(const SimTrace& trace) {
    std::vector<double> t;
    std::vector<double> e;
    std::vector<double> delta_cmd;
    t.reserve(trace.rows.size());
    e.reserve(trace.rows.size());
    delta_cmd.reserve(trace.rows.size());
    for (const auto& row : trace.rows) {
        t.push_back(row.t);
        e.push_back(row.e);
        delta_cmd.push_back(row.delta_cmd);
    }
    return compute_metrics(t, e, delta_cmd, trace.config.metrics);
}

}  // namespace dtcsim
