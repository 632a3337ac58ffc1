#include "btm/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "btm/env.hpp"
#include "btm/errors.hpp"
#include "btm/kahan.hpp"
#include "btm/parallel.hpp"
#include "btm/rng.hpp"
#include "btm/stats.hpp"

namespace btm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kE = 2.718281828459045235;

double pareto_draw(rng::Stream& s, double alpha) {
    return std::pow(rng::u01_open_closed(s.next_u64()), -1.0 / alpha);
}

}  // namespace

SumRegime scaling_regime(double alpha) {
    if (!(alpha > 0.0)) throw parameter_error("scaling_regime: alpha must be > 0");
    if (alpha < 1.0) return SumRegime::alpha_below_one;
    if (alpha == 1.0) return SumRegime::alpha_one;
    if (alpha < 2.0) return SumRegime::alpha_one_two;
    if (alpha == 2.0) return SumRegime::alpha_two;
    return SumRegime::alpha_above_two;
}

double phi_alpha(double t, double alpha) {
    if (!(alpha > 0.0)) throw parameter_error("phi_alpha: alpha must be > 0");
    if (alpha == 1.0) {
        if (!(t > kE)) throw parameter_error("phi_alpha: alpha = 1 requires t > e");
        return 1.0 / std::sqrt(t * std::log(t));
    }
    if (!(t > 0.0)) throw parameter_error("phi_alpha: t must be > 0");
    if (alpha < 1.0) return std::pow(t, -1.0 / (1.0 + alpha));
    return 1.0 / std::sqrt(t);
}

double v_alpha(double r, double alpha) {
    if (!(alpha > 0.0)) throw parameter_error("v_alpha: alpha must be > 0");
    if (!(r >= 1.0)) throw parameter_error("v_alpha: requires r >= 1");
    if (alpha < 1.0) return std::pow(r, 1.0 / alpha);
    if (alpha == 1.0) return r * std::max(1.0, std::log(r));
    return r;
}

LilConstants lil_constants(double alpha, double c_F) {
    if (!(c_F > 0.0)) throw parameter_error("lil_constants: c_F must be > 0");
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw regime_error("lil_constants: constants defined for alpha in (0,2]; got " +
                           std::to_string(alpha));
    LilConstants out{kNaN, kNaN, kNaN};
    const double root_half_gap = std::sqrt((2.0 - alpha) / 2.0);  // ((2-alpha)/2)^{1/2}
    if (alpha == 1.0) {
        out.liminf_const = c_F;
        out.k_alpha = -std::numbers::egamma_v<double> / std::numbers::sqrt2_v<double>;
        return out;
    }
    if (alpha == 2.0) {
        out.liminf_const = -std::sqrt(2.0 * c_F);
        out.k_alpha = -std::numbers::sqrt2_v<double>;
        return out;
    }
    const double gpow = std::pow(std::tgamma(2.0 - alpha), 1.0 / alpha);
    const double ratio = alpha / (1.0 - alpha);
    out.k_alpha = (gpow - 1.0) * ratio * root_half_gap;
    if (alpha < 1.0) {
        out.liminf_const = std::pow(c_F, 1.0 / alpha) * ratio * gpow;
        out.c_alpha = ratio * root_half_gap;
    } else {
        out.liminf_const = std::pow(c_F, 1.0 / alpha) * ratio * (gpow - 1.0);
    }
    return out;
}

double pareto_variance(double alpha) {
    if (!(alpha > 2.0)) throw regime_error("pareto_variance: needs alpha > 2");
    double m = alpha / (alpha - 1.0);
    return alpha / (alpha - 2.0) - m * m;
}

namespace {

struct Normalizers {
    double center_per_term;  // subtract center_per_term * n
    // liminf normalizer
    double liminf(double n, double alpha) const {
        switch (regime) {
            case SumRegime::alpha_below_one:
            case SumRegime::alpha_one_two:
                return std::pow(n, 1.0 / alpha) * std::pow(std::log(std::log(n)), 1.0 - 1.0 / alpha);
            case SumRegime::alpha_one:
                return n * std::log(n);
            case SumRegime::alpha_two:
                return std::sqrt(n * std::log(n) * std::log(std::log(n)));
            case SumRegime::alpha_above_two:
                return std::sqrt(n * std::log(std::log(n)));
        }
        return kNaN;
    }
    // limsup normalizer at the 0/infinity dichotomy boundary (trace only)
    double limsup(double n, double alpha) const {
        switch (regime) {
            case SumRegime::alpha_below_one:
            case SumRegime::alpha_one_two:
                return std::pow(n * std::log(n) * std::log(std::log(n)), 1.0 / alpha);
            case SumRegime::alpha_one:
                return n * std::log(n) * std::log(std::log(n));
            case SumRegime::alpha_two:
                return std::sqrt(n * std::log(n) * std::log(std::log(n)));
            case SumRegime::alpha_above_two:
                return std::sqrt(n * std::log(std::log(n)));
        }
        return kNaN;
    }
    SumRegime regime;
};

}  // namespace

ResultTable fluctuation_probe(double alpha, uint64_t n_max, uint64_t seed,
                              const std::function<double(uint64_t)>& draw) {
    if (n_max < 10) throw parameter_error("fluctuation_probe: n_max must be >= 10");
    SumRegime regime = scaling_regime(alpha);
    Normalizers nrm{alpha > 1.0 ? mean_trap(alpha) : 0.0, regime};

    rng::Stream stream(rng::derive_key(seed, 0));
    auto sample = [&](uint64_t i) -> double {
        return draw ? draw(i) : pareto_draw(stream, alpha);
    };

    ResultTable table({"block", "n_end", "sum", "mean", "centered", "nrm", "nrm_min", "nrm_max",
                       "nrm_limsup"});
    table.set_param("alpha", alpha);
    table.set_param("n_max", n_max);
    table.set_param("seed", seed);

    KahanSum sum;
    uint64_t block = 0;
    double block_min = kNaN, block_max = kNaN;
    for (uint64_t n = 1; n <= n_max; ++n) {
        sum.add(sample(n - 1));
        double nd = static_cast<double>(n);
        double centered = sum.value() - nrm.center_per_term * nd;
        if (n >= 16) {
            double v = centered / nrm.liminf(nd, alpha);
            if (std::isnan(block_min) || v < block_min) block_min = v;
            if (std::isnan(block_max) || v > block_max) block_max = v;
        }
        bool block_end = ((n + 1) & n) == 0 || n == n_max;  // n = 2^k - 1 or horizon
        if (block_end && n >= 16) {
            double nrm_end = centered / nrm.liminf(nd, alpha);
            double nrm_sup = centered / nrm.limsup(nd, alpha);
            table.add_row({static_cast<double>(block), nd, sum.value(), sum.value() / nd, centered,
                           nrm_end, block_min, block_max, nrm_sup});
            block_min = block_max = kNaN;
        }
        if (block_end) ++block;
    }
    return table;
}

namespace {

double median_leading_order(double alpha, double n) {
    if (alpha < 1.0) return std::pow(n, 1.0 / alpha);
    if (alpha == 1.0) return n * std::log(n);
    return n * mean_trap(alpha) + std::pow(n, 1.0 / alpha);
}

}  // namespace

ResultTable median_probe(double alpha, const std::vector<uint64_t>& n_list, uint64_t replicates,
                         uint64_t seed, int threads) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw regime_error("median_probe: alpha must lie in (0,2)");
    if (replicates < 1000)
        throw parameter_error("median_probe: needs at least 1000 replicates (got " +
                              std::to_string(replicates) + ")");
    if (n_list.empty()) throw parameter_error("median_probe: empty n list");

    ResultTable table({"n", "median", "ci_lo", "ci_hi", "leading", "ratio"});
    table.set_param("alpha", alpha);
    table.set_param("replicates", replicates);
    table.set_param("seed", seed);

    const int kBootstrap = 200;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        uint64_t n = n_list[ni];
        if (n == 0) throw parameter_error("median_probe: n must be >= 1");
        std::vector<double> sums(replicates);
        uint64_t group = rng::derive_key(seed, ni);
        parallel_for(replicates, threads, [&](uint64_t lo, uint64_t hi) {
            for (uint64_t r = lo; r < hi; ++r) {
                rng::Stream s(rng::derive_key(group, r));
                KahanSum acc;
                for (uint64_t i = 0; i < n; ++i) acc.add(pareto_draw(s, alpha));
                sums[r] = acc.value();
            }
        });
        std::sort(sums.begin(), sums.end());
        double med = median_sorted(sums);

        std::vector<double> boot(kBootstrap);
        rng::Stream bs(rng::derive_key(group, 0x626f6f74ULL));  // bootstrap stream
        std::vector<double> resample(replicates);
        for (int b = 0; b < kBootstrap; ++b) {
            for (uint64_t r = 0; r < replicates; ++r)
                resample[r] = sums[bs.next_below(replicates)];
            std::sort(resample.begin(), resample.end());
            boot[b] = median_sorted(resample);
        }
        std::sort(boot.begin(), boot.end());
        double ci_lo = quantile_sorted(boot, 0.025);
        double ci_hi = quantile_sorted(boot, 0.975);
        double leading = median_leading_order(alpha, static_cast<double>(n));
        table.add_row({static_cast<double>(n), med, ci_lo, ci_hi, leading, med / leading});
    }
    return table;
}

TailProbeResult tail_probe(double alpha, uint64_t n, const std::vector<double>& lambdas,
                           uint64_t replicates, uint64_t seed, int threads) {
    if (n < 1) throw parameter_error("tail_probe: n must be >= 1");
    if (lambdas.empty()) throw parameter_error("tail_probe: empty lambda grid");
    for (double l : lambdas)
        if (!(l >= 1.0)) throw parameter_error("tail_probe: all lambda must be >= 1");
    if (replicates < 10000) throw parameter_error("tail_probe: needs at least 1e4 replicates");

    TailProbeResult out;
    out.alpha = alpha;
    out.n = n;
    out.replicates = replicates;
    out.gamma = std::min(1.0, alpha);
    out.scale = v_alpha(static_cast<double>(n), alpha);
    out.lambdas = lambdas;

    std::vector<double> sums(replicates);
    parallel_for(replicates, threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t r = lo; r < hi; ++r) {
            rng::Stream s(rng::derive_key(seed, r));
            KahanSum acc;
            for (uint64_t i = 0; i < n; ++i) acc.add(pareto_draw(s, alpha));
            sums[r] = acc.value();
        }
    });
    std::sort(sums.begin(), sums.end());

    double m = static_cast<double>(replicates);
    for (double l : lambdas) {
        double low_thr = out.scale / l;
        double p_low, se_low;
        if (low_thr < static_cast<double>(n)) {
            // every summand is >= 1, so S_n >= n almost surely: exactly zero,
            // no Monte Carlo involved
            p_low = 0.0;
            se_low = 0.0;
        } else {
            auto it = std::upper_bound(sums.begin(), sums.end(), low_thr);
            p_low = static_cast<double>(it - sums.begin()) / m;
            se_low = binomial_se(p_low, replicates);
        }
        auto it_up = std::lower_bound(sums.begin(), sums.end(), l * out.scale);
        double p_up = static_cast<double>(sums.end() - it_up) / m;
        out.p_low.push_back(p_low);
        out.se_low.push_back(se_low);
        out.p_up.push_back(p_up);
        out.se_up.push_back(binomial_se(p_up, replicates));
    }

    auto fit = [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return xs.size() >= 2 ? ls_slope(xs, ys) : kNaN;
    };
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (out.p_up[i] > 0.0) {
            xs.push_back(std::log(lambdas[i]));
            ys.push_back(std::log(out.p_up[i]));
        }
    }
    out.slope_up = fit(xs, ys);
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (out.p_low[i] > 0.0) {
            xs.push_back(std::pow(lambdas[i], out.gamma));
            ys.push_back(std::log(out.p_low[i]));
        }
    }
    out.slope_low = fit(xs, ys);
    return out;
}

ResultTable TailProbeResult::to_table() const {
    ResultTable table({"lambda", "p_low", "se_low", "p_up", "se_up"});
    table.set_param("alpha", alpha);
    table.set_param("n", static_cast<uint64_t>(n));
    table.set_param("replicates", static_cast<uint64_t>(replicates));
    table.set_param("gamma", gamma);
    table.set_param("v_alpha_n", scale);
    table.set_param("slope_up", slope_up);
    table.set_param("slope_low", slope_low);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        table.add_row({lambdas[i], p_low[i], se_low[i], p_up[i], se_up[i]});
    return table;
}

}  // namespace btm
