#include "btm/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "btm/errors.hpp"
#include "btm/kahan.hpp"

namespace btm {

Landscape::Landscape(double alpha, uint64_t seed) : alpha_(alpha), seed_(seed) {
    if (!(alpha > 0.0)) throw parameter_error("Landscape: alpha must be > 0");
}

Landscape::Landscape(const Environment& env)
    : alpha_(env.alpha), seed_(env.seed), lo_(env.lo_site()), hi_(env.hi_site()),
      base_(env.taps) {}

Landscape Landscape::constant() {
    Landscape land(1.0, 0);
    land.constant_ = true;
    return land;
}

double Landscape::tau(long x) {
    if (constant_) return 1.0;
    if (x >= lo_ && x <= hi_) return base_[static_cast<std::size_t>(x - lo_)];
    if (x > hi_) {
        std::size_t idx = static_cast<std::size_t>(x - hi_ - 1);
        while (right_.size() <= idx)
            right_.push_back(site_tau(alpha_, seed_, hi_ + 1 + static_cast<long>(right_.size())));
        return right_[idx];
    }
    std::size_t idx = static_cast<std::size_t>(lo_ - 1 - x);
    while (left_.size() <= idx)
        left_.push_back(site_tau(alpha_, seed_, lo_ - 1 - static_cast<long>(left_.size())));
    return left_[idx];
}

long Trajectory::site_at(double t) const {
    if (t < 0.0 || t > t_end) throw range_error("Trajectory::site_at: time outside horizon");
    // right-continuous: the jump at exactly t has happened
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double v, const JumpEvent& e) { return v < e.time; });
    if (it == events.begin()) return start;
    return (it - 1)->site;
}

uint64_t Trajectory::jumps_until(double t) const {
    if (t < 0.0 || t > t_end) throw range_error("Trajectory::jumps_until: time outside horizon");
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double v, const JumpEvent& e) { return v < e.time; });
    return static_cast<uint64_t>(it - events.begin());
}

Trajectory simulate_direct(Landscape& land, long x0, double t_end, rng::Stream& stream) {
    if (!(t_end >= 0.0)) throw parameter_error("simulate_direct: t_end must be >= 0");
    Trajectory traj;
    traj.start = x0;
    traj.t_end = t_end;
    traj.env_seed = land.seed();
    long x = x0;
    KahanSum t;
    for (;;) {
        double hold = stream.next_exponential(land.tau(x));
        if (t.value() + hold > t_end) break;
        t.add(hold);
        x += stream.next_sign();
        traj.events.push_back({t.value(), x});
    }
    return traj;
}

Trajectory simulate_direct(const Environment& env, long x0, double t_end, rng::Stream& stream) {
    Landscape land(env);
    return simulate_direct(land, x0, t_end, stream);
}

SceneryClock simulate_scenery(Landscape& land, long x0, double srw_t_end, rng::Stream& stream) {
    if (!(srw_t_end >= 0.0)) throw parameter_error("simulate_scenery: horizon must be >= 0");
    SceneryClock clock;
    clock.srw.start = x0;
    clock.srw.t_end = srw_t_end;
    clock.srw.env_seed = land.seed();
    long y = x0;
    KahanSum s;  // SRW time
    KahanSum a;  // scenery functional
    for (;;) {
        double hold = stream.next_exponential(1.0);
        if (s.value() + hold > srw_t_end) {
            a.add(land.tau(y) * (srw_t_end - s.value()));
            break;
        }
        s.add(hold);
        a.add(land.tau(y) * hold);
        y += stream.next_sign();
        clock.srw.events.push_back({s.value(), y});
        clock.a_at_jumps.push_back(a.value());
    }
    clock.a_end = a.value();
    return clock;
}

double SceneryClock::a(double t) const {
    if (t < 0.0 || t > srw.t_end) throw range_error("SceneryClock::a: time outside horizon");
    auto it = std::upper_bound(srw.events.begin(), srw.events.end(), t,
                               [](double v, const JumpEvent& e) { return v < e.time; });
    std::size_t idx = static_cast<std::size_t>(it - srw.events.begin());
    double base_t = idx == 0 ? 0.0 : srw.events[idx - 1].time;
    double base_a = idx == 0 ? 0.0 : a_at_jumps[idx - 1];
    // slope within the holding interval, recovered from the stored
    // breakpoints (equals tau at the occupied site)
    double slope;
    if (idx < srw.events.size()) {
        slope = (a_at_jumps[idx] - base_a) / (srw.events[idx].time - base_t);
    } else {
        double seg_t = srw.t_end - base_t;
        slope = seg_t > 0.0 ? (a_end - base_a) / seg_t : 0.0;
    }
    return base_a + slope * (t - base_t);
}

double scenery_functional(const SceneryClock& clock, double t) { return clock.a(t); }

Trajectory simulate_timechange(Landscape& land, long x0, double t_end, rng::Stream& stream) {
    if (!(t_end >= 0.0)) throw parameter_error("simulate_timechange: t_end must be >= 0");
    Trajectory traj;
    traj.start = x0;
    traj.t_end = t_end;
    traj.env_seed = land.seed();
    long y = x0;
    KahanSum a;  // physical time A(s) at the current SRW time s
    for (;;) {
        double hold_srw = stream.next_exponential(1.0);
        double hold_phys = land.tau(y) * hold_srw;
        if (a.value() + hold_phys > t_end) break;  // A exceeds horizon inside this hold
        a.add(hold_phys);
        y += stream.next_sign();
        traj.events.push_back({a.value(), y});
    }
    return traj;
}

Trajectory simulate_timechange(const Environment& env, long x0, double t_end, rng::Stream& stream) {
    Landscape land(env);
    return simulate_timechange(land, x0, t_end, stream);
}

uint64_t quadratic_variation(const Trajectory& traj, double t) { return traj.jumps_until(t); }

double jump_power_sum(const Trajectory& traj, double t, int n) {
    if (t < 0.0 || t > traj.t_end) throw range_error("jump_power_sum: time outside horizon");
    if (n < 1) throw parameter_error("jump_power_sum: power must be >= 1");
    KahanSum s;
    long prev = traj.start;
    for (const auto& e : traj.events) {
        if (e.time > t) break;
        double step = std::abs(static_cast<double>(e.site - prev));
        s.add(std::pow(step, n));
        prev = e.site;
    }
    return s.value();
}

std::vector<PathStat> walk_at_times(Landscape& land, long x0, const std::vector<double>& grid,
                                    rng::Stream& stream) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw parameter_error("walk_at_times: negative grid time");
        if (i > 0 && grid[i] < grid[i - 1])
            throw parameter_error("walk_at_times: grid must be sorted ascending");
    }
    std::vector<PathStat> out(grid.size());
    long x = x0;
    uint64_t jumps = 0;
    KahanSum t;
    std::size_t g = 0;
    while (g < grid.size()) {
        double hold = stream.next_exponential(land.tau(x));
        double t_next = t.value() + hold;
        while (g < grid.size() && grid[g] < t_next) {
            out[g] = {x, jumps};
            ++g;
        }
        if (g == grid.size()) break;
        t.add(hold);
        ++jumps;
        x += stream.next_sign();
    }
    return out;
}

std::vector<double> scenery_at_times(Landscape& land, long x0, const std::vector<double>& grid,
                                     rng::Stream& stream) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw parameter_error("scenery_at_times: negative grid time");
        if (i > 0 && grid[i] < grid[i - 1])
            throw parameter_error("scenery_at_times: grid must be sorted ascending");
    }
    std::vector<double> out(grid.size());
    long y = x0;
    KahanSum s, a;
    std::size_t g = 0;
    while (g < grid.size()) {
        double tau = land.tau(y);
        double hold = stream.next_exponential(1.0);
        double s_next = s.value() + hold;
        while (g < grid.size() && grid[g] < s_next) {
            out[g] = a.value() + tau * (grid[g] - s.value());
            ++g;
        }
        if (g == grid.size()) break;
        s.add(hold);
        a.add(tau * hold);
        y += stream.next_sign();
    }
    return out;
}

double walk_exit_time(Landscape& land, long x0, long center, long n, rng::Stream& stream) {
    if (n < 1) throw parameter_error("walk_exit_time: n must be >= 1");
    if (std::labs(x0 - center) >= n) return 0.0;  // already outside
    long x = x0;
    KahanSum t;
    for (;;) {
        t.add(stream.next_exponential(land.tau(x)));
        x += stream.next_sign();
        if (std::labs(x - center) >= n) return t.value();
    }
}

double kolmogorov_distance(const std::vector<double>& sorted_samples,
                           const std::function<double(double)>& cdf) {
    if (sorted_samples.empty()) throw parameter_error("kolmogorov_distance: empty sample");
    const double m = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        if (i > 0 && sorted_samples[i] < sorted_samples[i - 1])
            throw parameter_error("kolmogorov_distance: sample not sorted");
        double f = cdf(sorted_samples[i]);
        double up = static_cast<double>(i + 1) / m - f;
        double down = f - static_cast<double>(i) / m;
        d = std::max(d, std::max(up, down));
    }
    return d;
}

double ks_two_sample(const std::vector<double>& sorted_a, const std::vector<double>& sorted_b) {
    if (sorted_a.empty() || sorted_b.empty())
        throw parameter_error("ks_two_sample: empty sample");
    const double na = static_cast<double>(sorted_a.size());
    const double nb = static_cast<double>(sorted_b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sorted_a.size() && j < sorted_b.size()) {
        double v = std::min(sorted_a[i], sorted_b[j]);
        while (i < sorted_a.size() && sorted_a[i] <= v) ++i;
        while (j < sorted_b.size() && sorted_b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_two_sample_critical(double level, uint64_t m, uint64_t n) {
    if (!(level > 0.0 && level < 1.0))
        throw parameter_error("ks_two_sample_critical: level must lie in (0,1)");
    if (m == 0 || n == 0) throw parameter_error("ks_two_sample_critical: empty sample sizes");
    double c = std::sqrt(-0.5 * std::log(level / 2.0));
    double md = static_cast<double>(m), nd = static_cast<double>(n);
    return c * std::sqrt((md + nd) / (md * nd));
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace btm
