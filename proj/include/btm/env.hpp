#pragma once
// Trap landscapes tau = (tau_x) with P[tau_0 >= u] = u^{-alpha} for u >= 1,
// sampled by inverse CDF from a counter-based per-site stream: the draw at a
// site depends only on (seed, site), so enlarging a window preserves
// existing sites bit for bit.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace btm {

struct Environment {
    double alpha = 0.0;   // tail exponent
    long offset = 0;      // leftmost site
    uint64_t seed = 0;    // reproducibility seed
    std::vector<double> taps;  // trap depths, taps[x - offset]

    long lo_site() const { return offset; }
    long hi_site() const { return offset + static_cast<long>(taps.size()) - 1; }
    bool contains(long x) const { return x >= lo_site() && x <= hi_site(); }
    double tau(long x) const;  // range-checked
};

// The per-site law: tau = U^{-1/alpha} with U uniform on (0,1] keyed by
// (seed, site). Window-independent by construction.
double site_tau(double alpha, uint64_t seed, long site);

Environment sample_environment(double alpha, long lo, long hi, uint64_t seed);

// V(x,n) = sum of tau over [x-n, x+n]; throws range_error if the window does
// not contain the summation range.
double volume(const Environment& env, long x, long n);

// E[tau_0] = alpha/(alpha-1); infinite-mean regime (alpha <= 1) throws.
double mean_trap(double alpha);

// Quantile, truncated mean and truncated variance of the generalized law
// F(x) = (1 - c_F x^{-alpha}) v 0 at truncation level s in (0,1):
//   Q(s)      = c_F^{1/alpha} (1-s)^{-1/alpha}
//   mu(s)     = int_0^{1-s} Q(u) du
//   sigma2(s) = s Q(1-s)^2 + int_0^{1-s} Q(u)^2 du - (s Q(1-s) + mu(s))^2
struct TruncatedStats {
    double quantile;
    double mean;
    double variance;
};
TruncatedStats truncated_stats(double alpha, double c_F, double s);

// CSV round trip: "# btm-environment alpha=.. offset=.. length=.. seed=.."
// followed by "site,tau" rows.
void write_environment_csv(const Environment& env, std::ostream& out);
void write_environment_csv_file(const Environment& env, const std::string& path);
Environment read_environment_csv(std::istream& in);
Environment read_environment_csv_file(const std::string& path);

}  // namespace btm
