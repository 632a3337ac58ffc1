#pragma once
// Quantitative-homogenization measurements: Kolmogorov distances of the
// rescaled walk against the normal law, quadratic-variation and scenery
// error moments, the quantitative local-CLT sup error with its
// cell-partition apparatus, and annealed on-diagonal kernel statistics.

#include <cstdint>
#include <optional>
#include <vector>

#include "btm/env.hpp"
#include "btm/table.hpp"

namespace btm {

enum class EnsembleMode { quenched, annealed };

// The trap law an experiment runs in: a Pareto(alpha) field keyed by a
// seed, or the constant field tau == 1 used for homogeneous control runs
// (alpha is kept as the regime tag for scaling functions).
struct SceneryLaw {
    bool constant = false;
    double alpha = 0.0;
    uint64_t seed = 0;

    static SceneryLaw pareto(double alpha, uint64_t seed) { return {false, alpha, seed}; }
    static SceneryLaw control(double alpha_tag = 3.0) { return {true, alpha_tag, 0}; }

    double mean_tau() const;  // E[tau_0]; 1 for the constant field
    double sigma2() const;    // 1 / E[tau_0]
};

// ----- Berry-Esseen distances -----

struct BEResult {
    EnsembleMode mode = EnsembleMode::quenched;
    SceneryLaw law;
    double sigma2 = 0.0;
    uint64_t replicates = 0;
    uint64_t seed = 0;
    std::vector<double> t_grid;
    std::vector<double> distance;  // Kolmogorov distance per t
    double slope = 0.0;            // fitted d log D / d log t
    double noise_floor = 0.0;      // 1/sqrt(M)
    ResultTable to_table() const;
};
// Distance of {X_t / (sigma sqrt(t))} to the standard normal CDF. Needs
// alpha > 2 unless the law is the constant control field.
BEResult berry_esseen(EnsembleMode mode, const SceneryLaw& law, const std::vector<double>& t_grid,
                      uint64_t replicates, uint64_t seed, int threads);

// ----- quadratic-variation and scenery errors -----

struct ErrorTrendResult {
    std::vector<double> t_grid;
    std::vector<double> estimate;  // per-t Monte Carlo mean
    std::vector<double> se;        // per-t standard error
    double exponent = 0.0;         // fitted d log estimate / d log t
    ResultTable to_table() const;
};

// E_0[| <X>_t / t - sigma^2 |^2] in a fixed (quenched) trap field.
ErrorTrendResult qv_error(const SceneryLaw& law, const std::vector<double>& t_grid,
                          uint64_t replicates, uint64_t seed, int threads);

// E_0[| A_t - E[tau_0] t |^2]  for the scenery functional of the unit-rate
// SRW; annealed mode resamples the field per replicate.
ErrorTrendResult scenery_error(EnsembleMode mode, const SceneryLaw& law,
                               const std::vector<double>& t_grid, uint64_t replicates,
                               uint64_t seed, int threads);

// ----- quantitative local CLT -----

struct LCLTResult {
    SceneryLaw law;
    double k_range = 0.0, t1 = 0.0, t2 = 0.0, dx = 0.0, dt = 0.0, theta = 0.0, tol = 0.0;
    std::vector<long> n_grid;
    std::vector<double> sup_error;     // E(n)
    std::vector<double> scaled_error;  // n^{2 theta / 3} E(n)
    ResultTable to_table() const;
};
// sup over |x| <= K, t in [T1,T2] (grids dx, dt) of
//   | E[tau_0] n p_{E[tau_0] n^2 t}(0, floor(n x)) - (2 pi t)^{-1/2} e^{-x^2/2t} |
// computed with the exact kernel engine on one quenched field.
LCLTResult lclt_error(const SceneryLaw& law, const std::vector<long>& n_grid, double k_range,
                      double t1, double t2, double dx, double dt, double theta, double tol,
                      int threads);

// Per-term decomposition of the local-CLT error through the cell partition
// at scale n (kernel-vs-cell-average, cell-CLT, volume, and Gaussian-average
// terms). The sup of each term over the grid is reported; their sum
// dominates the raw sup error.
struct UpsilonReport {
    long n = 0;
    int level = 0;        // N with n in [a^N, a^{N+1})
    long cell_width = 0;  // floor(a^{eta N})
    double sup_raw = 0.0;
    double sup_u1 = 0.0, sup_u2 = 0.0, sup_u3 = 0.0, sup_u4 = 0.0;
    double sup_sum = 0.0;  // sup of (u1+u2+u3+u4)
};
UpsilonReport lclt_upsilon(const SceneryLaw& law, long n, double k_range, double t1, double t2,
                           double dx, double dt, double a, double eta, double tol);

// ----- cell partitions and volume regularity -----

struct CellPartition {
    int level = 0;       // N
    double base = 0.0;   // a > 1
    double eta = 0.0;    // in (1/2, 1)
    double h = 0.0;      // ball radius factor
    long cell_width = 0; // floor(a^{eta N})
    long j_lo = 0, j_hi = 0;  // cells [j w, (j+1) w), j_lo <= j <= j_hi

    long n_cells() const { return j_hi - j_lo + 1; }
    long lo_site() const { return j_lo * cell_width; }
    long hi_site() const { return (j_hi + 1) * cell_width - 1; }
    double ball_radius() const;  // h a^{N+1}
};
CellPartition make_cell_partition(int level, double a, double eta, double h);

struct CellCheckResult {
    int level = 0;
    long cell_width = 0;
    long n_cells = 0;
    double kappa = 0.0;
    double sup_dev = 0.0;        // sup_I |V(I) - mu(I)|
    double bound_scale = 0.0;    // a^{kappa N}
    double implied_const = 0.0;  // sup_dev / a^{kappa N}
};
// mu(I) = mu_per_site * cell width; defaults to E[tau_0] of the environment.
CellCheckResult cell_volume_check(const Environment& env, const CellPartition& part, double kappa,
                                  std::optional<double> mu_per_site = {});

// Scan across levels; one row per N with the fitted slope of log sup_dev
// against N log a in the params.
ResultTable cell_volume_scan(const SceneryLaw& law, const std::vector<int>& levels, double a,
                             double eta, double h, double kappa);

// ----- annealed heat-kernel statistics -----

struct MomentResult {
    SceneryLaw law;
    double eps = 0.0;
    uint64_t n_envs = 0;
    std::vector<double> t_grid;
    std::vector<double> ratio;  // E[p_t(0,0)^eps] / phi_alpha(t)^eps
    std::vector<double> se;
    ResultTable to_table() const;
};
// eps in [0,1]; eps = 1 requires alpha > 3/2.
MomentResult annealed_moment(const SceneryLaw& law, double eps, const std::vector<double>& t_grid,
                             uint64_t n_envs, double tol, int threads);

struct TightnessResult {
    SceneryLaw law;
    double lambda = 0.0;
    uint64_t n_envs = 0;
    std::vector<double> t_grid;
    std::vector<double> coverage;  // fraction with ratio in [1/lambda, lambda]
    std::vector<double> se;
    ResultTable to_table() const;
};
// Fraction of independent fields with phi_alpha(t)^{-1} p_t(0,0) in
// [1/lambda, lambda]; lambda >= 1.
TightnessResult tightness_probe(const SceneryLaw& law, const std::vector<double>& t_grid,
                                uint64_t n_envs, double lambda, double tol, int threads);

}  // namespace btm
