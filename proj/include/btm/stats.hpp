#pragma once
// Small statistics helpers shared by the probes and experiments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "btm/errors.hpp"
#include "btm/kahan.hpp"

namespace btm {

inline double mean_of(const std::vector<double>& v) {
    KahanSum s;
    for (double x : v) s.add(x);
    return v.empty() ? 0.0 : s.value() / static_cast<double>(v.size());
}

// Unbiased sample variance.
inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    KahanSum s;
    for (double x : v) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(v.size() - 1);
}

inline double standard_error(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

inline double binomial_se(double p_hat, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(n));
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw parameter_error("ls_slope: need two or more paired points");
    double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw parameter_error("ls_slope: degenerate abscissae");
    return sxy / sxx;
}

// Median of a sorted sample (average of the middle pair for even sizes).
inline double median_sorted(const std::vector<double>& sorted) {
    if (sorted.empty()) throw parameter_error("median of empty sample");
    std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

// Quantile of a sorted sample by nearest-rank interpolation.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw parameter_error("quantile of empty sample");
    q = std::clamp(q, 0.0, 1.0);
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace btm
