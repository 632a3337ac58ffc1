#pragma once
// Counter-based random numbers. Every draw is a pure function of
// (key, counter), so environments are extensible site by site and replicate
// streams can be handed to workers in any order without touching shared
// state. All mappings are fixed here once and for all: changing them would
// silently invalidate golden outputs.

#include <cmath>
#include <cstdint>

namespace btm::rng {

// SplitMix64 finalizer. Bijective, full-avalanche mix of one 64-bit word.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Keyed hash of a counter: two finalizer rounds around a key injection.
inline uint64_t keyed_hash(uint64_t key, uint64_t ctr) {
    return splitmix64(key ^ splitmix64(ctr + 0x9e3779b97f4a7c15ULL * key));
}

// Derive a sub-key, e.g. key = derive_key(seed, replicate) or
// derive_key(seed, tag). Distinct labels give unrelated streams.
inline uint64_t derive_key(uint64_t seed, uint64_t label) {
    return splitmix64(seed ^ (splitmix64(label) + 0x632be59bd9b4e019ULL));
}

// Uniform on (0,1]; attains 1 (used by inverse-CDF laws whose support
// endpoint corresponds to u = 1).
inline double u01_open_closed(uint64_t h) {
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

// Uniform on (0,1); never 0 or 1 (safe for log()).
inline double u01_open_open(uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential stream over a keyed counter. Copyable value type; replicate
// streams are made with Stream(derive_key(seed, replicate)).
class Stream {
  public:
    explicit Stream(uint64_t key) : key_(key) {}
    static Stream for_replicate(uint64_t seed, uint64_t replicate) {
        return Stream(derive_key(seed, replicate));
    }

    uint64_t next_u64() { return keyed_hash(key_, ctr_++); }
    double next_u01() { return u01_open_open(next_u64()); }

    // Exponential by inversion; strictly positive.
    double next_exponential(double mean) { return -mean * std::log(next_u01()); }

    // Fair +/-1.
    int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

    // Uniform index in [0, n); used for bootstrap resampling. A 128-bit
    // multiply keeps the map unbiased enough for statistics at n << 2^32.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

  private:
    uint64_t key_;
    uint64_t ctr_ = 0;
};

}  // namespace btm::rng
