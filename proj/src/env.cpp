#include "btm/env.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "btm/errors.hpp"
#include "btm/kahan.hpp"
#include "btm/rng.hpp"
#include "btm/table.hpp"

namespace btm {

double Environment::tau(long x) const {
    if (!contains(x))
        throw range_error("environment window [" + std::to_string(lo_site()) + "," +
                          std::to_string(hi_site()) + "] does not contain site " +
                          std::to_string(x));
    return taps[static_cast<std::size_t>(x - offset)];
}

double site_tau(double alpha, uint64_t seed, long site) {
    uint64_t h = rng::keyed_hash(seed, static_cast<uint64_t>(site));
    double u = rng::u01_open_closed(h);
    return std::pow(u, -1.0 / alpha);
}

Environment sample_environment(double alpha, long lo, long hi, uint64_t seed) {
    if (!(alpha > 0.0)) throw parameter_error("sample_environment: alpha must be > 0");
    if (lo > hi) throw parameter_error("sample_environment: empty window (lo > hi)");
    Environment env;
    env.alpha = alpha;
    env.offset = lo;
    env.seed = seed;
    env.taps.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long x = lo; x <= hi; ++x)
        env.taps[static_cast<std::size_t>(x - lo)] = site_tau(alpha, seed, x);
    return env;
}

double volume(const Environment& env, long x, long n) {
    if (n < 0) throw parameter_error("volume: radius must be nonnegative");
    if (x - n < env.lo_site() || x + n > env.hi_site())
        throw range_error("volume: [" + std::to_string(x - n) + "," + std::to_string(x + n) +
                          "] outside environment window");
    KahanSum s;
    for (long y = x - n; y <= x + n; ++y) s.add(env.taps[static_cast<std::size_t>(y - env.offset)]);
    return s.value();
}

double mean_trap(double alpha) {
    if (!(alpha > 1.0))
        throw regime_error("mean_trap: E[tau_0] is infinite for alpha <= 1 (alpha = " +
                           std::to_string(alpha) + ")");
    return alpha / (alpha - 1.0);
}

TruncatedStats truncated_stats(double alpha, double c_F, double s) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw parameter_error("truncated_stats: alpha must lie in (0,2)");
    if (!(c_F > 0.0)) throw parameter_error("truncated_stats: c_F must be > 0");
    if (!(s > 0.0 && s < 1.0)) throw parameter_error("truncated_stats: s must lie in (0,1)");

    const double cpow = std::pow(c_F, 1.0 / alpha);
    TruncatedStats out;
    out.quantile = cpow * std::pow(1.0 - s, -1.0 / alpha);

    if (alpha == 1.0) {
        out.mean = -c_F * std::log(s);
    } else {
        out.mean = cpow * alpha / (1.0 - alpha) * (std::pow(s, 1.0 - 1.0 / alpha) - 1.0);
    }

    // sigma2(s) = s Q(1-s)^2 + int_0^{1-s} Q^2 - (s Q(1-s) + mu(s))^2, with
    // int_0^{1-s} Q(u)^2 du = c_F^{2/alpha} * alpha/(2-alpha) * (s^{1-2/alpha} - 1).
    const double q_top = cpow * std::pow(s, -1.0 / alpha);  // Q(1-s)
    const double int_q2 =
        cpow * cpow * alpha / (2.0 - alpha) * (std::pow(s, 1.0 - 2.0 / alpha) - 1.0);
    const double lin = s * q_top + out.mean;
    out.variance = s * q_top * q_top + int_q2 - lin * lin;
    return out;
}

void write_environment_csv(const Environment& env, std::ostream& out) {
    out << "# btm-environment alpha=" << format_double(env.alpha) << " offset=" << env.offset
        << " length=" << env.taps.size() << " seed=" << env.seed << '\n';
    out << "site,tau\n";
    for (std::size_t i = 0; i < env.taps.size(); ++i)
        out << (env.offset + static_cast<long>(i)) << ',' << format_double(env.taps[i]) << '\n';
}

void write_environment_csv_file(const Environment& env, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_environment_csv(env, out);
    if (!out) throw io_error("write failed for '" + path + "'");
}

Environment read_environment_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# btm-environment", 0) != 0)
        throw io_error("environment CSV must start with '# btm-environment' header");
    Environment env;
    long length = -1;
    {
        std::istringstream hs(line.substr(std::string("# btm-environment").size()));
        std::string kv;
        while (hs >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "alpha") env.alpha = std::strtod(val.c_str(), nullptr);
            else if (key == "offset") env.offset = std::strtol(val.c_str(), nullptr, 10);
            else if (key == "length") length = std::strtol(val.c_str(), nullptr, 10);
            else if (key == "seed") env.seed = std::strtoull(val.c_str(), nullptr, 10);
        }
    }
    if (!std::getline(in, line) || line.rfind("site,tau", 0) != 0)
        throw io_error("environment CSV missing 'site,tau' header row");
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw io_error("malformed environment CSV row: " + line);
        long site = std::strtol(line.c_str(), nullptr, 10);
        double tau = std::strtod(line.c_str() + comma + 1, nullptr);
        long expected = env.offset + static_cast<long>(env.taps.size());
        if (site != expected)
            throw io_error("environment CSV sites not contiguous at " + std::to_string(site));
        env.taps.push_back(tau);
    }
    if (env.taps.empty()) throw io_error("environment CSV has no sites");
    if (length >= 0 && length != static_cast<long>(env.taps.size()))
        throw io_error("environment CSV length mismatch");
    return env;
}

Environment read_environment_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return read_environment_csv(in);
}

}  // namespace btm
