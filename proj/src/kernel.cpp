#include "btm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "btm/errors.hpp"
#include "btm/kahan.hpp"
#include "btm/simd.hpp"
#include "btm/sums.hpp"

namespace btm {

double Generator::tau_at(long x) const {
    if (!contains(x))
        throw range_error("generator window does not contain site " + std::to_string(x));
    return tau[static_cast<std::size_t>(x - lo)];
}

double Generator::rate(long x, long y) const {
    if (!contains(x) || !contains(y)) return 0.0;
    long d = y - x;
    double r = 0.5 / tau_at(x);
    if (d == 1 || d == -1) return r;
    if (d == 0) return -2.0 * r;
    return 0.0;
}

Generator build_generator(const Environment& env, long lo, long hi, Boundary boundary) {
    if (hi - lo + 1 < 3) throw parameter_error("build_generator: window must have >= 3 sites");
    if (lo < env.lo_site() || hi > env.hi_site())
        throw range_error("build_generator: window outside environment");
    Generator gen;
    gen.lo = lo;
    gen.hi = hi;
    gen.boundary = boundary;
    std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    gen.tau.resize(n);
    gen.stay.resize(n);
    gen.hop.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double tau = env.tau(lo + static_cast<long>(i));
        gen.tau[i] = tau;
        gen.hop[i] = 0.5 / tau;
        gen.stay[i] = 1.0 - 1.0 / tau;
    }
    if (boundary == Boundary::reflecting) {
        // the outward jump is suppressed: its mass stays put
        gen.stay[0] += gen.hop[0];
        gen.stay[n - 1] += gen.hop[n - 1];
    }
    return gen;
}

double KernelRow::prob_at(long y) const {
    if (y < lo || y > hi)
        throw range_error("kernel row window [" + std::to_string(lo) + "," + std::to_string(hi) +
                          "] does not contain site " + std::to_string(y));
    return prob[static_cast<std::size_t>(y - lo)];
}

double KernelRow::mass() const {
    KahanSum s;
    for (double p : prob) s.add(p);
    return s.value();
}

uint64_t poisson_truncation_order(double t, double tol) {
    if (t <= 0.0) return 0;
    // P(N >= K) <= exp(-t + K - K log(K/t)) for K > t
    const double log_tol = std::log(tol);
    uint64_t k = static_cast<uint64_t>(std::ceil(t)) + 1;
    while (-t + static_cast<double>(k) -
               static_cast<double>(k) * std::log(static_cast<double>(k) / t) >
           log_tol)
        ++k;
    return k;
}

long default_window_halfwidth(double t, double tol) {
    uint64_t k = poisson_truncation_order(t, tol);
    if (k == 0) return 10;
    // reflection + sub-Gaussian bound on a +-1 walk with at most k steps:
    // P(max |D| >= h) <= 4 exp(-h^2 / 2k); keep it below tol/10
    double h = std::sqrt(2.0 * static_cast<double>(k) * std::log(40.0 / tol));
    return static_cast<long>(std::ceil(h)) + 10;
}

namespace {

// Poisson(t) weights 0..K by recurrence from the mode (safe for t far
// beyond exp(-t) underflow).
std::vector<double> poisson_weights(double t, uint64_t K) {
    std::vector<double> w(K + 1, 0.0);
    uint64_t mode = std::min<uint64_t>(static_cast<uint64_t>(t), K);
    double log_wm = static_cast<double>(mode) * std::log(t) - t -
                    std::lgamma(static_cast<double>(mode) + 1.0);
    w[mode] = std::exp(log_wm);
    for (uint64_t k = mode; k > 0; --k) w[k - 1] = w[k] * static_cast<double>(k) / t;
    for (uint64_t k = mode; k < K; ++k) w[k + 1] = w[k] * t / static_cast<double>(k + 1);
    return w;
}

}  // namespace

KernelRow transition_row(const Generator& gen, long x, double t, double tol) {
    if (!(t >= 0.0)) throw parameter_error("transition_row: t must be >= 0");
    if (!(tol > 0.0 && tol <= 1e-6))
        throw parameter_error("transition_row: tol must lie in (0, 1e-6]");
    if (!gen.contains(x))
        throw range_error("transition_row: base point outside generator window");

    const std::size_t n = gen.size();
    KernelRow row;
    row.x = x;
    row.t = t;
    row.lo = gen.lo;
    row.hi = gen.hi;
    row.tol = tol;
    row.prob.assign(n, 0.0);

    const std::size_t xi = static_cast<std::size_t>(x - gen.lo);
    if (t == 0.0) {
        row.prob[xi] = 1.0;
        row.leak = 0.0;
        return row;
    }

    const uint64_t K = poisson_truncation_order(t, tol);
    const std::vector<double> w = poisson_weights(t, K);
    // weights below this threshold are skipped; total skipped mass <= tol/1e4
    const double w_skip = tol * 1e-4 / static_cast<double>(K + 1);

    std::vector<double> cur(n, 0.0), next(n, 0.0);
    cur[xi] = 1.0;

    const bool absorbing = gen.boundary == Boundary::absorbing;
    KahanSum absorbed;  // cumulative mass lost by v_k
    KahanSum leak;      // sum_k w_k * absorbed_k
    if (w[0] >= w_skip) simd::axpy(row.prob.data(), cur.data(), w[0], n);
    for (uint64_t k = 1; k <= K; ++k) {
        if (absorbing) {
            absorbed.add(cur[0] * gen.hop[0]);
            absorbed.add(cur[n - 1] * gen.hop[n - 1]);
        }
        simd::tridiag_step(next.data(), cur.data(), gen.stay.data(), gen.hop.data(), n);
        cur.swap(next);
        if (w[k] >= w_skip) {
            simd::axpy(row.prob.data(), cur.data(), w[k], n);
            leak.add(w[k] * absorbed.value());
        }
    }
    row.leak = leak.value();
    if (row.leak > 10.0 * tol)
        throw window_error("transition_row: window too small, boundary leak " +
                               format_double(row.leak) + " exceeds 10*tol at t = " +
                               format_double(t),
                           row.leak);
    return row;
}

double heat_kernel(const Generator& gen, long x, long y, double t, double tol) {
    KernelRow row = transition_row(gen, x, t, tol);
    return row.prob_at(y) / gen.tau_at(y);
}

Generator window_generator(const Environment& env, long center, double t, double tol,
                           Boundary boundary) {
    long h = default_window_halfwidth(t, tol);
    long lo = std::max(env.lo_site(), center - h);
    long hi = std::min(env.hi_site(), center + h);
    return build_generator(env, lo, hi, boundary);
}

namespace {

// Solve the killed-generator system on the interior of B(x,n): for every
// interior site w,  u(w) - (u(w-1) + u(w+1))/2 = rhs(w),  u = 0 outside.
// (This is -L u = f with rows scaled by tau_w, rhs(w) = tau_w f(w).)
std::vector<double> solve_killed(const std::vector<double>& rhs) {
    const std::size_t m = rhs.size();
    std::vector<double> c(m, 0.0), d(m, 0.0), u(m, 0.0);
    double beta = 1.0;
    c[0] = -0.5 / beta;
    d[0] = rhs[0] / beta;
    for (std::size_t i = 1; i < m; ++i) {
        beta = 1.0 - (-0.5) * c[i - 1];
        c[i] = -0.5 / beta;
        d[i] = (rhs[i] - (-0.5) * d[i - 1]) / beta;
    }
    u[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i > 0; --i) u[i - 1] = d[i - 1] - c[i - 1] * u[i];
    return u;
}

}  // namespace

double green_function(const Environment& env, long x, long n, long y, long z) {
    if (n <= 0) throw parameter_error("green_function: n must be positive");
    if (std::labs(y - x) >= n || std::labs(z - x) >= n) return 0.0;
    long lo = x - n + 1, hi = x + n - 1;
    if (lo < env.lo_site() || hi > env.hi_site())
        throw range_error("green_function: ball interior outside environment window");
    std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> rhs(m, 0.0);
    rhs[static_cast<std::size_t>(z - lo)] = env.tau(z);
    std::vector<double> u = solve_killed(rhs);
    return u[static_cast<std::size_t>(y - lo)] / env.tau(z);
}

double green_closed_form(long x, long n, long y, long z) {
    if (n <= 0) throw parameter_error("green_closed_form: n must be positive");
    if (std::labs(y - x) >= n || std::labs(z - x) >= n) return 0.0;
    double lo = static_cast<double>(std::min(y, z) - x);
    double hi = static_cast<double>(std::max(y, z) - x);
    double nn = static_cast<double>(n);
    return (nn + lo) * (nn - hi) / nn;
}

double expected_exit_time(const Environment& env, long x, long n, long y) {
    if (n <= 0) throw parameter_error("expected_exit_time: n must be positive");
    if (std::labs(y - x) >= n) return 0.0;
    long lo = x - n + 1, hi = x + n - 1;
    if (lo < env.lo_site() || hi > env.hi_site())
        throw range_error("expected_exit_time: ball interior outside environment window");
    std::size_t m = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = env.tau(lo + static_cast<long>(i));
    std::vector<double> u = solve_killed(rhs);
    return u[static_cast<std::size_t>(y - lo)];
}

double effective_resistance(long /*x*/, long n) {
    if (n < 1) throw parameter_error("effective_resistance: n must be >= 1");
    return static_cast<double>(n) / 2.0;
}

Prop31Report check_prop31(const Environment& env, long x, long n, double tol,
                          double numerical_slack) {
    if (n < 2) throw parameter_error("check_prop31: n must be >= 2");
    Prop31Report rep;
    rep.x = x;
    rep.n = n;
    const double v_n = volume(env, x, n);
    const double v_nm1 = volume(env, x, n - 1);
    const double v_2n = volume(env, x, 2 * n);

    rep.t_upper = 2.0 * static_cast<double>(n) * v_n;
    {
        Generator gen = window_generator(env, x, rep.t_upper, tol);
        KernelRow row = transition_row(gen, x, rep.t_upper, tol);
        rep.lhs_upper = row.prob_at(x) / gen.tau_at(x);
    }
    rep.rhs_upper = 2.0 / v_nm1;
    rep.slack_upper = rep.rhs_upper - rep.lhs_upper;
    rep.holds_upper = rep.lhs_upper <= rep.rhs_upper + numerical_slack;

    rep.t_lower = 0.5 * static_cast<double>(n) * v_n;
    {
        Generator gen = window_generator(env, x, rep.t_lower, tol);
        KernelRow row = transition_row(gen, x, rep.t_lower, tol);
        rep.lhs_lower = row.prob_at(x) / gen.tau_at(x);
    }
    rep.rhs_lower = v_n * v_n / (16.0 * v_2n * v_2n * v_2n);
    rep.slack_lower = rep.lhs_lower - rep.rhs_lower;
    rep.holds_lower = rep.lhs_lower >= rep.rhs_lower - numerical_slack;
    return rep;
}

double check_holder(const Environment& env, double t, long radius, double tol) {
    if (!(t >= 1.0)) throw parameter_error("check_holder: t must be >= 1");
    if (radius < 1) throw parameter_error("check_holder: radius must be >= 1");
    Generator gen = window_generator(env, 0, t, tol);
    if (-radius < gen.lo || radius > gen.hi)
        throw range_error("check_holder: radius exceeds computable window");
    KernelRow row = transition_row(gen, 0, t, tol);
    const double scale = std::pow(t, -1.5);
    double worst = 0.0;
    std::vector<double> dens(static_cast<std::size_t>(2 * radius + 1));
    for (long y = -radius; y <= radius; ++y)
        dens[static_cast<std::size_t>(y + radius)] = row.prob_at(y) / gen.tau_at(y);
    for (std::size_t i = 0; i < dens.size(); ++i) {
        for (std::size_t j = i + 1; j < dens.size(); ++j) {
            double diff = dens[i] - dens[j];
            double ratio = diff * diff / (static_cast<double>(j - i) * scale);
            worst = std::max(worst, ratio);
        }
    }
    return worst;
}

ResultTable ondiagonal_trace(const Environment& env, double alpha, const std::vector<double>& t_grid,
                             double tol) {
    if (t_grid.empty()) throw parameter_error("ondiagonal_trace: empty t grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw parameter_error("ondiagonal_trace: t grid must be strictly increasing");
    if (!(alpha > 0.0)) throw parameter_error("ondiagonal_trace: alpha must be > 0");

    const bool scaled = alpha > 1.0;
    std::vector<std::string> cols{"t", "p00", "p_over_phi"};
    if (scaled) cols.push_back("p_over_phi_scaled");
    ResultTable table(cols);
    table.set_param("alpha", alpha);
    table.set_param("tol", tol);

    const double mean = scaled ? mean_trap(alpha) : 0.0;
    for (double t : t_grid) {
        Generator gen = window_generator(env, 0, t, tol);
        KernelRow row = transition_row(gen, 0, t, tol);
        double p = row.prob_at(0) / gen.tau_at(0);
        std::vector<double> r{t, p, p / phi_alpha(t, alpha)};
        if (scaled) r.push_back(p / phi_alpha(mean * t, alpha));
        table.add_row(r);
    }
    return table;
}

}  // namespace btm
