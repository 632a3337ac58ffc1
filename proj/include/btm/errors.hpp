#pragma once
// Error taxonomy shared by all modules. The CLI maps each class to a
// distinct exit status.

#include <stdexcept>
#include <string>

namespace btm {

// Invalid argument values (bad grids, empty windows, out-of-contract sizes).
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Parameter is structurally fine but lies in the wrong tail-exponent regime
// (e.g. infinite-mean alpha where a finite mean is required).
struct regime_error : std::domain_error {
    explicit regime_error(const std::string& msg) : std::domain_error(msg) {}
};

// Query outside the represented window / horizon. Never silently truncated.
struct range_error : std::out_of_range {
    explicit range_error(const std::string& msg) : std::out_of_range(msg) {}
};

// Truncated-window computation leaked more probability mass than the
// requested tolerance allows; carries the measured leak.
struct window_error : std::runtime_error {
    double measured_leak;
    window_error(const std::string& msg, double leak)
        : std::runtime_error(msg), measured_leak(leak) {}
};

// File / serialization problems.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace btm
