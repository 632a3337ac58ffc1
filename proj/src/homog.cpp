#include "btm/homog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "btm/errors.hpp"
#include "btm/kahan.hpp"
#include "btm/kernel.hpp"
#include "btm/parallel.hpp"
#include "btm/rng.hpp"
#include "btm/stats.hpp"
#include "btm/sums.hpp"
#include "btm/walk.hpp"

namespace btm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// stream labels: walks, the quenched field, per-replicate annealed fields
constexpr uint64_t kTagWalk = 0x57414c4bULL;
constexpr uint64_t kTagEnvs = 0x454e5653ULL;

double gaussian_density(double x, double t) {
    return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi_v<double> * t);
}

void check_t_grid(const std::vector<double>& t_grid, const char* who) {
    if (t_grid.empty()) throw parameter_error(std::string(who) + ": empty t grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw parameter_error(std::string(who) + ": t must be > 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw parameter_error(std::string(who) + ": t grid must be strictly increasing");
    }
}

void require_alpha_above_2(const SceneryLaw& law, const char* who) {
    if (!law.constant && !(law.alpha > 2.0))
        throw regime_error(std::string(who) +
                           ": requires alpha > 2 (finite variance of tau); got alpha = " +
                           std::to_string(law.alpha));
}

Landscape make_landscape(const SceneryLaw& law, uint64_t field_seed) {
    if (law.constant) return Landscape::constant();
    return Landscape(law.alpha, field_seed);
}

// Fixed environment window for kernel-based experiments.
Environment make_environment(const SceneryLaw& law, long halfwidth) {
    if (law.constant) {
        Environment env;
        env.alpha = law.alpha;
        env.offset = -halfwidth;
        env.seed = 0;
        env.taps.assign(static_cast<std::size_t>(2 * halfwidth + 1), 1.0);
        return env;
    }
    return sample_environment(law.alpha, -halfwidth, halfwidth, law.seed);
}

// Direct walks for all replicates; sites/jumps stored in replicate-major
// slots so results do not depend on the thread count.
void run_walks(const SceneryLaw& law, EnsembleMode mode, const std::vector<double>& grid,
               uint64_t replicates, uint64_t seed, int threads, std::vector<long>& sites,
               std::vector<uint64_t>& jumps) {
    const std::size_t tg = grid.size();
    sites.assign(replicates * tg, 0);
    jumps.assign(replicates * tg, 0);
    const uint64_t walk_group = rng::derive_key(seed, kTagWalk);
    const uint64_t env_group = rng::derive_key(seed, kTagEnvs);
    parallel_for(replicates, threads, [&](uint64_t lo, uint64_t hi) {
        Landscape shared = make_landscape(law, law.seed);
        for (uint64_t m = lo; m < hi; ++m) {
            rng::Stream stream(rng::derive_key(walk_group, m));
            std::vector<PathStat> stats;
            if (mode == EnsembleMode::annealed && !law.constant) {
                Landscape fresh(law.alpha, rng::derive_key(env_group, m));
                stats = walk_at_times(fresh, 0, grid, stream);
            } else {
                stats = walk_at_times(shared, 0, grid, stream);
            }
            for (std::size_t g = 0; g < tg; ++g) {
                sites[m * tg + g] = stats[g].site;
                jumps[m * tg + g] = stats[g].jumps;
            }
        }
    });
}

}  // namespace

double SceneryLaw::mean_tau() const { return constant ? 1.0 : mean_trap(alpha); }
double SceneryLaw::sigma2() const { return 1.0 / mean_tau(); }

// ---------------------- Berry-Esseen ----------------------

BEResult berry_esseen(EnsembleMode mode, const SceneryLaw& law, const std::vector<double>& t_grid,
                      uint64_t replicates, uint64_t seed, int threads) {
    require_alpha_above_2(law, "berry_esseen");
    check_t_grid(t_grid, "berry_esseen");
    if (replicates < 2) throw parameter_error("berry_esseen: needs at least 2 replicates");

    BEResult out;
    out.mode = mode;
    out.law = law;
    out.sigma2 = law.sigma2();
    out.replicates = replicates;
    out.seed = seed;
    out.t_grid = t_grid;
    out.noise_floor = 1.0 / std::sqrt(static_cast<double>(replicates));

    std::vector<long> sites;
    std::vector<uint64_t> jumps;
    run_walks(law, mode, t_grid, replicates, seed, threads, sites, jumps);

    const double sigma = std::sqrt(out.sigma2);
    const std::size_t tg = t_grid.size();
    std::vector<double> z(replicates);
    for (std::size_t g = 0; g < tg; ++g) {
        double scale = sigma * std::sqrt(t_grid[g]);
        for (uint64_t m = 0; m < replicates; ++m)
            z[m] = static_cast<double>(sites[m * tg + g]) / scale;
        std::sort(z.begin(), z.end());
        out.distance.push_back(kolmogorov_distance(z, std_normal_cdf));
    }

    if (tg >= 2) {
        std::vector<double> lx, ly;
        for (std::size_t g = 0; g < tg; ++g) {
            lx.push_back(std::log(t_grid[g]));
            ly.push_back(std::log(out.distance[g]));
        }
        out.slope = ls_slope(lx, ly);
    } else {
        out.slope = kNaN;
    }
    return out;
}

ResultTable BEResult::to_table() const {
    ResultTable table({"t", "D", "noise_floor"});
    table.set_param("mode", mode == EnsembleMode::quenched ? "quenched" : "annealed");
    table.set_param("scenery", law.constant ? "constant" : "pareto");
    table.set_param("alpha", law.alpha);
    table.set_param("env_seed", law.seed);
    table.set_param("sigma2", sigma2);
    table.set_param("replicates", replicates);
    table.set_param("seed", seed);
    table.set_param("slope", slope);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        table.add_row({t_grid[i], distance[i], noise_floor});
    return table;
}

// ---------------------- quadratic variation / scenery ----------------------

namespace {

ErrorTrendResult trend_from_values(const std::vector<double>& t_grid,
                                   const std::vector<double>& values, uint64_t replicates) {
    ErrorTrendResult out;
    out.t_grid = t_grid;
    const std::size_t tg = t_grid.size();
    std::vector<double> per_t(replicates);
    for (std::size_t g = 0; g < tg; ++g) {
        for (uint64_t m = 0; m < replicates; ++m) per_t[m] = values[m * tg + g];
        out.estimate.push_back(mean_of(per_t));
        out.se.push_back(standard_error(per_t));
    }
    if (tg >= 2) {
        std::vector<double> lx, ly;
        for (std::size_t g = 0; g < tg; ++g) {
            if (out.estimate[g] > 0.0) {
                lx.push_back(std::log(t_grid[g]));
                ly.push_back(std::log(out.estimate[g]));
            }
        }
        out.exponent = lx.size() >= 2 ? ls_slope(lx, ly) : kNaN;
    } else {
        out.exponent = kNaN;
    }
    return out;
}

}  // namespace

ErrorTrendResult qv_error(const SceneryLaw& law, const std::vector<double>& t_grid,
                          uint64_t replicates, uint64_t seed, int threads) {
    require_alpha_above_2(law, "qv_error");
    check_t_grid(t_grid, "qv_error");
    if (replicates < 2) throw parameter_error("qv_error: needs at least 2 replicates");

    std::vector<long> sites;
    std::vector<uint64_t> jumps;
    run_walks(law, EnsembleMode::quenched, t_grid, replicates, seed, threads, sites, jumps);

    const double sigma2 = law.sigma2();
    const std::size_t tg = t_grid.size();
    std::vector<double> values(replicates * tg);
    for (uint64_t m = 0; m < replicates; ++m) {
        for (std::size_t g = 0; g < tg; ++g) {
            double dev = static_cast<double>(jumps[m * tg + g]) / t_grid[g] - sigma2;
            values[m * tg + g] = dev * dev;
        }
    }
    return trend_from_values(t_grid, values, replicates);
}

ErrorTrendResult scenery_error(EnsembleMode mode, const SceneryLaw& law,
                               const std::vector<double>& t_grid, uint64_t replicates,
                               uint64_t seed, int threads) {
    require_alpha_above_2(law, "scenery_error");
    check_t_grid(t_grid, "scenery_error");
    if (replicates < 2) throw parameter_error("scenery_error: needs at least 2 replicates");

    const double mean_tau = law.mean_tau();
    const std::size_t tg = t_grid.size();
    std::vector<double> values(replicates * tg);
    const uint64_t walk_group = rng::derive_key(seed, kTagWalk);
    const uint64_t env_group = rng::derive_key(seed, kTagEnvs);
    parallel_for(replicates, threads, [&](uint64_t lo, uint64_t hi) {
        Landscape shared = make_landscape(law, law.seed);
        for (uint64_t m = lo; m < hi; ++m) {
            rng::Stream stream(rng::derive_key(walk_group, m));
            std::vector<double> a_vals;
            if (mode == EnsembleMode::annealed && !law.constant) {
                Landscape fresh(law.alpha, rng::derive_key(env_group, m));
                a_vals = scenery_at_times(fresh, 0, t_grid, stream);
            } else {
                a_vals = scenery_at_times(shared, 0, t_grid, stream);
            }
            for (std::size_t g = 0; g < tg; ++g) {
                double dev = a_vals[g] - mean_tau * t_grid[g];
                values[m * tg + g] = dev * dev;
            }
        }
    });
    return trend_from_values(t_grid, values, replicates);
}

ResultTable ErrorTrendResult::to_table() const {
    ResultTable table({"t", "estimate", "se"});
    table.set_param("exponent", exponent);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        table.add_row({t_grid[i], estimate[i], se[i]});
    return table;
}

// ---------------------- quantitative local CLT ----------------------

namespace {

// floor(n x) with snapping of binary-representation noise on the grid
long lattice_site(double n, double x) {
    double v = n * x;
    double r = std::round(v);
    if (std::abs(v - r) < 1e-9) return static_cast<long>(r);
    return static_cast<long>(std::floor(v));
}

std::vector<double> linear_grid(double lo, double hi, double step, const char* who) {
    if (!(step > 0.0)) throw parameter_error(std::string(who) + ": grid step must be > 0");
    if (!(hi >= lo)) throw parameter_error(std::string(who) + ": empty grid range");
    std::vector<double> grid;
    for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step)
        grid.push_back(v);
    return grid;
}

void validate_theta(const SceneryLaw& law, double theta, const char* who) {
    if (law.constant) {
        if (!(theta > 0.0)) throw parameter_error(std::string(who) + ": theta must be > 0");
        return;
    }
    double theta_max = (law.alpha - 2.0) / (10.0 * (2.0 * law.alpha - 1.0));
    if (!(theta > 0.0 && theta < theta_max))
        throw parameter_error(std::string(who) + ": theta must lie in (0, " +
                              format_double(theta_max) + "); got " + format_double(theta));
}

}  // namespace

LCLTResult lclt_error(const SceneryLaw& law, const std::vector<long>& n_grid, double k_range,
                      double t1, double t2, double dx, double dt, double theta, double tol,
                      int threads) {
    require_alpha_above_2(law, "lclt_error");
    validate_theta(law, theta, "lclt_error");
    if (n_grid.empty()) throw parameter_error("lclt_error: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw parameter_error("lclt_error: n must be >= 1");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw parameter_error("lclt_error: n grid must be strictly increasing");
    }
    if (!(k_range > 0.0)) throw parameter_error("lclt_error: K must be > 0");
    if (!(t1 > 0.0 && t2 >= t1)) throw parameter_error("lclt_error: need 0 < T1 <= T2");

    const double mean_tau = law.mean_tau();
    const std::vector<double> ts = linear_grid(t1, t2, dt, "lclt_error");
    const std::vector<double> xs = linear_grid(-k_range, k_range, dx, "lclt_error");

    const long n_max = n_grid.back();
    long halfwidth =
        std::max(default_window_halfwidth(mean_tau * static_cast<double>(n_max) * n_max * t2, tol),
                 static_cast<long>(std::ceil(static_cast<double>(n_max) * k_range)) + 2);
    const Environment env = make_environment(law, halfwidth);

    // one task per (n, t) pair; sup over x inside, merged over t afterwards
    const std::size_t nt = ts.size();
    std::vector<double> sup_slot(n_grid.size() * nt, 0.0);
    parallel_for(n_grid.size() * nt, threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t task = lo; task < hi; ++task) {
            const long n = n_grid[task / nt];
            const double t = ts[task % nt];
            const double t_phys = mean_tau * static_cast<double>(n) * n * t;
            Generator gen = window_generator(env, 0, t_phys, tol);
            KernelRow row = transition_row(gen, 0, t_phys, tol);
            double sup = 0.0;
            for (double x : xs) {
                long site = lattice_site(static_cast<double>(n), x);
                double p = row.prob_at(site) / gen.tau_at(site);
                double err = std::abs(mean_tau * static_cast<double>(n) * p - gaussian_density(x, t));
                sup = std::max(sup, err);
            }
            sup_slot[task] = sup;
        }
    });

    LCLTResult out;
    out.law = law;
    out.k_range = k_range;
    out.t1 = t1;
    out.t2 = t2;
    out.dx = dx;
    out.dt = dt;
    out.theta = theta;
    out.tol = tol;
    out.n_grid = n_grid;
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        double sup = 0.0;
        for (std::size_t ti = 0; ti < nt; ++ti) sup = std::max(sup, sup_slot[ni * nt + ti]);
        out.sup_error.push_back(sup);
        out.scaled_error.push_back(
            std::pow(static_cast<double>(n_grid[ni]), 2.0 * theta / 3.0) * sup);
    }
    return out;
}

ResultTable LCLTResult::to_table() const {
    ResultTable table({"n", "sup_error", "scaled_error"});
    table.set_param("scenery", law.constant ? "constant" : "pareto");
    table.set_param("alpha", law.alpha);
    table.set_param("env_seed", law.seed);
    table.set_param("K", k_range);
    table.set_param("T1", t1);
    table.set_param("T2", t2);
    table.set_param("dx", dx);
    table.set_param("dt", dt);
    table.set_param("theta", theta);
    table.set_param("tol", tol);
    for (std::size_t i = 0; i < n_grid.size(); ++i)
        table.add_row({static_cast<double>(n_grid[i]), sup_error[i], scaled_error[i]});
    return table;
}

UpsilonReport lclt_upsilon(const SceneryLaw& law, long n, double k_range, double t1, double t2,
                           double dx, double dt, double a, double eta, double tol) {
    require_alpha_above_2(law, "lclt_upsilon");
    if (n < 2) throw parameter_error("lclt_upsilon: n must be >= 2");
    if (!(a > 1.0)) throw parameter_error("lclt_upsilon: base must be > 1");
    if (!(eta > 0.5 && eta < 1.0)) throw parameter_error("lclt_upsilon: eta must lie in (1/2,1)");

    int level = 1;
    while (std::pow(a, level + 1) <= static_cast<double>(n)) ++level;

    const double mean_tau = law.mean_tau();
    const std::vector<double> ts = linear_grid(t1, t2, dt, "lclt_upsilon");
    const std::vector<double> xs = linear_grid(-k_range, k_range, dx, "lclt_upsilon");
    const long w = static_cast<long>(std::floor(std::pow(a, eta * level)));
    if (w < 1) throw parameter_error("lclt_upsilon: degenerate cell width");

    long halfwidth = std::max(
        default_window_halfwidth(mean_tau * static_cast<double>(n) * n * t2, tol),
        static_cast<long>(std::ceil(static_cast<double>(n) * k_range)) + w + 2);
    const Environment env = make_environment(law, halfwidth);

    UpsilonReport rep;
    rep.n = n;
    rep.level = level;
    rep.cell_width = w;

    for (double t : ts) {
        const double t_phys = mean_tau * static_cast<double>(n) * n * t;
        Generator gen = window_generator(env, 0, t_phys, tol);
        KernelRow row = transition_row(gen, 0, t_phys, tol);
        for (double x : xs) {
            long site = lattice_site(static_cast<double>(n), x);
            long j = site >= 0 ? site / w : -((-site + w - 1) / w);  // floor division
            long cell_lo = j * w;
            KahanSum p_cell, v_cell;
            for (long y = cell_lo; y < cell_lo + w; ++y) {
                p_cell.add(row.prob_at(y));
                v_cell.add(env.tau(y));
            }
            const double p_in_cell = p_cell.value();
            const double vol = v_cell.value();
            const double nd = static_cast<double>(n);
            const double p_site = row.prob_at(site) / gen.tau_at(site);
            const double gauss = gaussian_density(x, t);
            const double sqrt_t = std::sqrt(t);
            const double p_bm = std_normal_cdf(static_cast<double>(cell_lo + w) / (nd * sqrt_t)) -
                                std_normal_cdf(static_cast<double>(cell_lo) / (nd * sqrt_t));
            const double wd = static_cast<double>(w);

            double raw = std::abs(mean_tau * nd * p_site - gauss);
            double u1 = mean_tau * nd * std::abs(p_site - p_in_cell / vol);
            double u2 = mean_tau * nd / vol * std::abs(p_in_cell - p_bm);
            double u3 = nd / wd * p_bm * std::abs(1.0 - mean_tau * wd / vol);
            double u4 = std::abs(nd * p_bm / wd - gauss);

            rep.sup_raw = std::max(rep.sup_raw, raw);
            rep.sup_u1 = std::max(rep.sup_u1, u1);
            rep.sup_u2 = std::max(rep.sup_u2, u2);
            rep.sup_u3 = std::max(rep.sup_u3, u3);
            rep.sup_u4 = std::max(rep.sup_u4, u4);
            rep.sup_sum = std::max(rep.sup_sum, u1 + u2 + u3 + u4);
        }
    }
    return rep;
}

// ---------------------- cell partitions ----------------------

double CellPartition::ball_radius() const {
    return h * std::pow(base, static_cast<double>(level) + 1.0);
}

CellPartition make_cell_partition(int level, double a, double eta, double h) {
    if (level < 1) throw parameter_error("make_cell_partition: level must be >= 1");
    if (!(a > 1.0)) throw parameter_error("make_cell_partition: base must be > 1");
    if (!(eta > 0.5 && eta < 1.0))
        throw parameter_error("make_cell_partition: eta must lie in (1/2, 1)");
    if (!(h > 0.0)) throw parameter_error("make_cell_partition: h must be > 0");
    CellPartition part;
    part.level = level;
    part.base = a;
    part.eta = eta;
    part.h = h;
    part.cell_width = static_cast<long>(std::floor(std::pow(a, eta * level)));
    if (part.cell_width < 1) throw parameter_error("make_cell_partition: degenerate cell width");
    double radius = part.ball_radius();
    part.j_lo = static_cast<long>(std::floor(-radius / static_cast<double>(part.cell_width)));
    part.j_hi = static_cast<long>(std::floor(radius / static_cast<double>(part.cell_width)));
    return part;
}

CellCheckResult cell_volume_check(const Environment& env, const CellPartition& part, double kappa,
                                  std::optional<double> mu_per_site) {
    if (!(kappa > 0.5 && kappa < part.eta))
        throw parameter_error("cell_volume_check: kappa must lie in (1/2, eta)");
    if (part.lo_site() < env.lo_site() || part.hi_site() > env.hi_site())
        throw range_error("cell_volume_check: partition outside environment window");
    const double mu = mu_per_site ? *mu_per_site : mean_trap(env.alpha);

    CellCheckResult out;
    out.level = part.level;
    out.cell_width = part.cell_width;
    out.n_cells = part.n_cells();
    out.kappa = kappa;
    for (long j = part.j_lo; j <= part.j_hi; ++j) {
        KahanSum v;
        for (long y = j * part.cell_width; y < (j + 1) * part.cell_width; ++y) v.add(env.tau(y));
        double dev = std::abs(v.value() - mu * static_cast<double>(part.cell_width));
        out.sup_dev = std::max(out.sup_dev, dev);
    }
    out.bound_scale = std::pow(part.base, kappa * static_cast<double>(part.level));
    out.implied_const = out.sup_dev / out.bound_scale;
    return out;
}

ResultTable cell_volume_scan(const SceneryLaw& law, const std::vector<int>& levels, double a,
                             double eta, double h, double kappa) {
    if (levels.empty()) throw parameter_error("cell_volume_scan: empty level list");
    int max_level = *std::max_element(levels.begin(), levels.end());
    CellPartition widest = make_cell_partition(max_level, a, eta, h);
    long halfwidth = std::max(std::labs(widest.lo_site()), std::labs(widest.hi_site())) + 1;
    Environment env = make_environment(law, halfwidth);
    std::optional<double> mu;
    if (law.constant) mu = 1.0;

    ResultTable table({"level", "cell_width", "n_cells", "sup_dev", "bound_scale", "implied_const"});
    table.set_param("scenery", law.constant ? "constant" : "pareto");
    table.set_param("alpha", law.alpha);
    table.set_param("env_seed", law.seed);
    table.set_param("a", a);
    table.set_param("eta", eta);
    table.set_param("h", h);
    table.set_param("kappa", kappa);
    std::vector<double> lx, ly;
    for (int level : levels) {
        CellPartition part = make_cell_partition(level, a, eta, h);
        CellCheckResult res = cell_volume_check(env, part, kappa, mu);
        table.add_row({static_cast<double>(res.level), static_cast<double>(res.cell_width),
                       static_cast<double>(res.n_cells), res.sup_dev, res.bound_scale,
                       res.implied_const});
        if (res.sup_dev > 0.0) {
            lx.push_back(static_cast<double>(level) * std::log(a));
            ly.push_back(std::log(res.sup_dev));
        }
    }
    table.set_param("dev_slope", lx.size() >= 2 ? ls_slope(lx, ly) : kNaN);
    return table;
}

// ---------------------- annealed kernel statistics ----------------------

namespace {

// exact p_t(0,0) for every (env, t) pair, env-major slots
std::vector<double> ensemble_diagonals(const SceneryLaw& law, const std::vector<double>& t_grid,
                                       uint64_t n_envs, double tol, int threads) {
    const std::size_t tg = t_grid.size();
    const double t_max = t_grid.back();
    const long halfwidth = default_window_halfwidth(t_max, tol);
    std::vector<double> diag(n_envs * tg);
    parallel_for(n_envs, threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t e = lo; e < hi; ++e) {
            SceneryLaw local = law;
            if (!law.constant) local.seed = rng::derive_key(law.seed, e);
            Environment env = make_environment(local, halfwidth);
            for (std::size_t g = 0; g < tg; ++g) {
                Generator gen = window_generator(env, 0, t_grid[g], tol);
                KernelRow row = transition_row(gen, 0, t_grid[g], tol);
                diag[e * tg + g] = row.prob_at(0) / gen.tau_at(0);
            }
        }
    });
    return diag;
}

}  // namespace

MomentResult annealed_moment(const SceneryLaw& law, double eps, const std::vector<double>& t_grid,
                             uint64_t n_envs, double tol, int threads) {
    check_t_grid(t_grid, "annealed_moment");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw parameter_error("annealed_moment: eps must lie in [0,1]");
    if (eps == 1.0 && !law.constant && !(law.alpha > 1.5))
        throw regime_error("annealed_moment: eps = 1 requires alpha > 3/2; got alpha = " +
                           std::to_string(law.alpha));
    if (n_envs < 1) throw parameter_error("annealed_moment: needs at least one environment");

    std::vector<double> diag = ensemble_diagonals(law, t_grid, n_envs, tol, threads);
    MomentResult out;
    out.law = law;
    out.eps = eps;
    out.n_envs = n_envs;
    out.t_grid = t_grid;
    const std::size_t tg = t_grid.size();
    std::vector<double> vals(n_envs);
    for (std::size_t g = 0; g < tg; ++g) {
        double scale = std::pow(phi_alpha(t_grid[g], law.alpha), eps);
        for (uint64_t e = 0; e < n_envs; ++e)
            vals[e] = std::pow(diag[e * tg + g], eps) / scale;
        out.ratio.push_back(mean_of(vals));
        out.se.push_back(standard_error(vals));
    }
    return out;
}

ResultTable MomentResult::to_table() const {
    ResultTable table({"t", "ratio", "se"});
    table.set_param("scenery", law.constant ? "constant" : "pareto");
    table.set_param("alpha", law.alpha);
    table.set_param("env_seed", law.seed);
    table.set_param("eps", eps);
    table.set_param("n_envs", n_envs);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        table.add_row({t_grid[i], ratio[i], se[i]});
    return table;
}

TightnessResult tightness_probe(const SceneryLaw& law, const std::vector<double>& t_grid,
                                uint64_t n_envs, double lambda, double tol, int threads) {
    check_t_grid(t_grid, "tightness_probe");
    if (!(lambda >= 1.0)) throw parameter_error("tightness_probe: lambda must be >= 1");
    if (n_envs < 1) throw parameter_error("tightness_probe: needs at least one environment");

    std::vector<double> diag = ensemble_diagonals(law, t_grid, n_envs, tol, threads);
    TightnessResult out;
    out.law = law;
    out.lambda = lambda;
    out.n_envs = n_envs;
    out.t_grid = t_grid;
    const std::size_t tg = t_grid.size();
    for (std::size_t g = 0; g < tg; ++g) {
        double phi = phi_alpha(t_grid[g], law.alpha);
        uint64_t covered = 0;
        for (uint64_t e = 0; e < n_envs; ++e) {
            double ratio = diag[e * tg + g] / phi;
            if (ratio >= 1.0 / lambda && ratio <= lambda) ++covered;
        }
        double frac = static_cast<double>(covered) / static_cast<double>(n_envs);
        out.coverage.push_back(frac);
        out.se.push_back(binomial_se(frac, n_envs));
    }
    return out;
}

ResultTable TightnessResult::to_table() const {
    ResultTable table({"t", "coverage", "se"});
    table.set_param("scenery", law.constant ? "constant" : "pareto");
    table.set_param("alpha", law.alpha);
    table.set_param("env_seed", law.seed);
    table.set_param("lambda", lambda);
    table.set_param("n_envs", n_envs);
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        table.add_row({t_grid[i], coverage[i], se[i]});
    return table;
}

}  // namespace btm
