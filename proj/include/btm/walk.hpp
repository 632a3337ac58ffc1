#pragma once
// Event-driven Monte Carlo of the trap-model walk by two constructions:
// direct exponential clocks, and the time change of the unit-rate simple
// random walk through the scenery functional A_t = int_0^t tau_{Y_s} ds.
// Bulk experiments accumulate functionals on the fly and never retain
// trajectories.

#include <cstdint>
#include <functional>
#include <vector>

#include "btm/env.hpp"
#include "btm/rng.hpp"

namespace btm {

// Lazily extending trap field. Lookups outside the materialized window are
// drawn from the same per-site stream an enlarged window would use, so a
// walk can leave any finite window without changing the law.
class Landscape {
  public:
    Landscape(double alpha, uint64_t seed);       // hash-backed, initially empty
    explicit Landscape(const Environment& env);   // seeded from a sampled window
    static Landscape constant();                  // tau == 1 control field

    double tau(long x);
    uint64_t seed() const { return seed_; }
    bool is_constant() const { return constant_; }

  private:
    bool constant_ = false;
    double alpha_ = 0.0;
    uint64_t seed_ = 0;
    long lo_ = 0, hi_ = -1;         // materialized base window (may be empty)
    std::vector<double> base_;
    std::vector<double> left_, right_;  // lazy extensions beyond the base
};

struct JumpEvent {
    double time;  // jump time
    long site;    // site after the jump
};

struct Trajectory {
    long start = 0;
    double t_end = 0.0;
    std::vector<JumpEvent> events;  // strictly increasing times, +-1 steps
    uint64_t env_seed = 0;
    uint64_t replicate = 0;

    long site_at(double t) const;        // right-continuous
    uint64_t jumps_until(double t) const;
};

// Direct construction: wait Exponential(mean tau_x), then jump to a uniform
// neighbour. Walks never fail on window exits (the landscape extends).
Trajectory simulate_direct(Landscape& land, long x0, double t_end, rng::Stream& stream);
Trajectory simulate_direct(const Environment& env, long x0, double t_end, rng::Stream& stream);

// Unit-rate SRW Y together with the additive functional A. A is continuous,
// strictly increasing and piecewise linear with slopes tau >= 1.
struct SceneryClock {
    Trajectory srw;                  // Y path, unit-rate clocks
    std::vector<double> a_at_jumps;  // A at each jump time of Y
    double a_end = 0.0;              // A at srw.t_end

    double a(double t) const;  // exact piecewise-linear A_t, t <= srw.t_end
};
SceneryClock simulate_scenery(Landscape& land, long x0, double srw_t_end, rng::Stream& stream);
double scenery_functional(const SceneryClock& clock, double t);

// Time-change construction: X_t = Y_{A^{-1}(t)}. Matches simulate_direct in
// law; with a shared stream it reproduces the direct trajectory exactly.
Trajectory simulate_timechange(Landscape& land, long x0, double t_end, rng::Stream& stream);
Trajectory simulate_timechange(const Environment& env, long x0, double t_end, rng::Stream& stream);

// Number of jumps up to t; for this unit-jump martingale it equals the
// quadratic variation.
uint64_t quadratic_variation(const Trajectory& traj, double t);
// sum over jumps s <= t of |X_s - X_{s-}|^n, accumulated literally.
double jump_power_sum(const Trajectory& traj, double t, int n);

// Memory-flat bulk runners.
struct PathStat {
    long site = 0;
    uint64_t jumps = 0;
};
// State of the direct walk at each grid time (grid sorted ascending).
std::vector<PathStat> walk_at_times(Landscape& land, long x0, const std::vector<double>& grid,
                                    rng::Stream& stream);
// A_t of the unit-rate SRW at each grid time.
std::vector<double> scenery_at_times(Landscape& land, long x0, const std::vector<double>& grid,
                                     rng::Stream& stream);
// First time the direct walk leaves B(center, n).
double walk_exit_time(Landscape& land, long x0, long center, long n, rng::Stream& stream);

// Exact Kolmogorov sup-distance of a sorted sample against a reference CDF:
// max_i max(i/M - F(x_(i)), F(x_(i)) - (i-1)/M).
double kolmogorov_distance(const std::vector<double>& sorted_samples,
                           const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov statistic and the asymptotic critical value
// at a given significance level.
double ks_two_sample(const std::vector<double>& sorted_a, const std::vector<double>& sorted_b);
double ks_two_sample_critical(double level, uint64_t m, uint64_t n);

// Standard normal CDF, |error| <= 1e-12.
double std_normal_cdf(double x);

}  // namespace btm
