#pragma once
// Data-parallel inner loops of the kernel engine, with scalar reference
// implementations and vector variants selected at runtime. Both variants
// perform the identical per-element operation order (mul/add, no FMA), so
// they produce bit-identical results; the equivalence tests assert exact
// equality.

#include <cstddef>
#include <string>

namespace btm::simd {

// One uniformized jump-matrix application on a window:
//   out[i] = in[i]*stay[i] + in[i-1]*hop[i-1] + in[i+1]*hop[i+1]
// with in[-1] = in[n] = 0. "stay" is the lazy-stay probability per site and
// "hop" the per-side jump probability. out and in must not alias.
using TridiagStepFn = void (*)(double* out, const double* in, const double* stay,
                               const double* hop, std::size_t n);

// acc[i] += w * x[i]
using AxpyFn = void (*)(double* acc, const double* x, double w, std::size_t n);

struct Kernels {
    TridiagStepFn tridiag_step;
    AxpyFn axpy;
    const char* name;
};

// Scalar reference (always available).
const Kernels& scalar_kernels();

// Best variant for this machine; honors BTMLAB_SIMD={scalar,avx2,neon} for
// forcing a path. Resolved once on first use.
const Kernels& active_kernels();

// Name of the active variant ("scalar", "avx2", "neon").
std::string active_name();

// Variants present in this build (for tests); entries may be rejected at
// runtime by the CPU check.
const Kernels* avx2_kernels_if_built();
const Kernels* neon_kernels_if_built();
bool cpu_supports_avx2();

inline void tridiag_step(double* out, const double* in, const double* stay, const double* hop,
                         std::size_t n) {
    active_kernels().tridiag_step(out, in, stay, hop, n);
}

inline void axpy(double* acc, const double* x, double w, std::size_t n) {
    active_kernels().axpy(acc, x, w, n);
}

}  // namespace btm::simd
