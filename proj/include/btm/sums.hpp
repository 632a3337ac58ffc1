#pragma once
// Analytics and Monte Carlo probes for i.i.d. heavy-tailed partial sums
// S_n = X_1 + ... + X_n with P[X > u] = c_F u^{-alpha} (support [c_F^{1/alpha}, inf)):
// scaling functions, iterated-logarithm constants, median scaling and
// small/large deviation tails.

#include <cstdint>
#include <functional>
#include <vector>

#include "btm/table.hpp"

namespace btm {

enum class SumRegime { alpha_below_one, alpha_one, alpha_one_two, alpha_two, alpha_above_two };
SumRegime scaling_regime(double alpha);

// On-diagonal heat-kernel scale: t^{-1/(1+alpha)} (alpha<1),
// t^{-1/2}(log t)^{-1/2} (alpha=1, needs t > e), t^{-1/2} (alpha>1).
double phi_alpha(double t, double alpha);

// Ball-volume scale: r^{1/alpha} (alpha<1), r*max(1,log r) (alpha=1),
// r (alpha>1); requires r >= 1.
double v_alpha(double r, double alpha);

// Almost-sure liminf constants of the normalized sums, and the constants
// K_alpha (in [-sqrt(2),0]) and C_alpha from the truncated-moment route.
// C_alpha exists only for alpha in (0,1); reported as NaN otherwise.
// Regimes covered: alpha in (0,2]; above 2 the classical LIL applies and
// this call raises a regime error.
struct LilConstants {
    double liminf_const;
    double k_alpha;
    double c_alpha;
};
LilConstants lil_constants(double alpha, double c_F);

// Variance of a single Pareto(alpha) summand (alpha > 2).
double pareto_variance(double alpha);

// Running normalized partial sums over dyadic blocks [2^k, 2^{k+1}).
// Columns: block, n_end, sum, mean, centered, nrm (centered / liminf
// normalizer), nrm_min, nrm_max (over the block), nrm_limsup (centered /
// boundary limsup normalizer). Normalized statistics are tracked for
// n >= 16. `draw`, when provided, replaces the Pareto sampler (index ->
// value); used for degenerate-scenery checks.
ResultTable fluctuation_probe(double alpha, uint64_t n_max, uint64_t seed,
                              const std::function<double(uint64_t)>& draw = {});

// Empirical medians of S_n with bootstrap confidence intervals, divided by
// the regime's leading order (n^{1/alpha}, n log n, or n E[X1] + n^{1/alpha}).
// alpha in (0,2); replicates >= 1000.
ResultTable median_probe(double alpha, const std::vector<uint64_t>& n_list, uint64_t replicates,
                         uint64_t seed, int threads);

// Lower/upper tail estimates P(S_n <= v_alpha(n)/lambda), P(S_n >= lambda v_alpha(n)).
// Lower estimates are exactly 0 (no sampling) whenever v_alpha(n)/lambda < n,
// since every summand is >= 1.
struct TailProbeResult {
    double alpha = 0.0;
    uint64_t n = 0;
    uint64_t replicates = 0;
    double gamma = 0.0;    // min(1, alpha)
    double scale = 0.0;    // v_alpha(n)
    std::vector<double> lambdas;
    std::vector<double> p_low, se_low;
    std::vector<double> p_up, se_up;
    double slope_up = 0.0;   // fitted d log p_up / d log lambda
    double slope_low = 0.0;  // fitted d log p_low / d lambda^gamma
    ResultTable to_table() const;
};
TailProbeResult tail_probe(double alpha, uint64_t n, const std::vector<double>& lambdas,
                           uint64_t replicates, uint64_t seed, int threads);

}  // namespace btm
