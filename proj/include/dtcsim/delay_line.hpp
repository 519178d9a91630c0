#pragma once

// Fixed-length FIFO realizing a discrete delay of k samples.
//
// push(v) returns the value pushed k calls earlier; the first k calls return
// the fill value. k = 0 is an exact pass-through. Two lines of length k1 and
// k2 in series behave like one line of length k1 + k2 when their fills agree.

#include <cstddef>
#include <deque>
#include <utility>

namespace dtcsim {

template <class T>
class DelayLine {
  public:
    DelayLine(std::size_t delay_steps, T fill)
        : delay_(delay_steps), buffer_(delay_steps, std::move(fill)) {}

    /// Inserts the newest value, returns the value from delay() steps ago.
    T push(T value) {
        if (delay_ == 0) {
            return value;
        }
        buffer_.push_back(std::move(value));
        T out = std::move(buffer_.front());
        buffer_.pop_front();
        return out;
    }

    std::size_t delay() const { return delay_; }

  private:
    std::size_t delay_;
    std::deque<T> buffer_;  // size stays == delay_
};

}  // namespace dtcsim
