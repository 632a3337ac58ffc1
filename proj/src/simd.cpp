#include "btm/simd.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace btm::simd {

// ---------------------- scalar reference ----------------------

namespace {

void tridiag_step_scalar(double* out, const double* in, const double* stay, const double* hop,
                         std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        out[0] = in[0] * stay[0];
        return;
    }
    out[0] = in[0] * stay[0] + in[1] * hop[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (in[i] * stay[i] + in[i - 1] * hop[i - 1]) + in[i + 1] * hop[i + 1];
    out[n - 1] = in[n - 1] * stay[n - 1] + in[n - 2] * hop[n - 2];
}

void axpy_scalar(double* acc, const double* x, double w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] + w * x[i];
}

const Kernels kScalar{tridiag_step_scalar, axpy_scalar, "scalar"};

// ---------------------- NEON (aarch64) ----------------------

#if defined(__aarch64__)
void tridiag_step_neon(double* out, const double* in, const double* stay, const double* hop,
                       std::size_t n) {
    if (n < 4) {
        tridiag_step_scalar(out, in, stay, hop, n);
        return;
    }
    out[0] = in[0] * stay[0] + in[1] * hop[1];
    std::size_t i = 1;
    for (; i + 2 < n; i += 2) {
        float64x2_t c = vld1q_f64(in + i);
        float64x2_t l = vld1q_f64(in + i - 1);
        float64x2_t r = vld1q_f64(in + i + 1);
        float64x2_t d = vld1q_f64(stay + i);
        float64x2_t hl = vld1q_f64(hop + i - 1);
        float64x2_t hr = vld1q_f64(hop + i + 1);
        float64x2_t res =
            vaddq_f64(vaddq_f64(vmulq_f64(c, d), vmulq_f64(l, hl)), vmulq_f64(r, hr));
        vst1q_f64(out + i, res);
    }
    for (; i + 1 < n; ++i)
        out[i] = (in[i] * stay[i] + in[i - 1] * hop[i - 1]) + in[i + 1] * hop[i + 1];
    out[n - 1] = in[n - 1] * stay[n - 1] + in[n - 2] * hop[n - 2];
}

void axpy_neon(double* acc, const double* x, double w, std::size_t n) {
    float64x2_t vw = vdupq_n_f64(w);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t a = vld1q_f64(acc + i);
        float64x2_t v = vld1q_f64(x + i);
        vst1q_f64(acc + i, vaddq_f64(a, vmulq_f64(vw, v)));
    }
    for (; i < n; ++i) acc[i] = acc[i] + w * x[i];
}

const Kernels kNeon{tridiag_step_neon, axpy_neon, "neon"};
#endif

const Kernels* pick_active() {
    const char* force = std::getenv("BTMLAB_SIMD");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return &kScalar;
#if defined(__aarch64__)
        if (std::strcmp(force, "neon") == 0) return &kNeon;
#endif
        if (std::strcmp(force, "avx2") == 0) {
            const Kernels* k = avx2_kernels_if_built();
            if (k != nullptr && cpu_supports_avx2()) return k;
        }
        return &kScalar;
    }
#if defined(__aarch64__)
    return &kNeon;
#else
    const Kernels* k = avx2_kernels_if_built();
    if (k != nullptr && cpu_supports_avx2()) return k;
    return &kScalar;
#endif
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels& active_kernels() {
    static const Kernels* active = pick_active();
    return *active;
}

std::string active_name() { return active_kernels().name; }

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

#if !defined(BTM_HAVE_AVX2_TU)
const Kernels* avx2_kernels_if_built() { return nullptr; }
#endif

const Kernels* neon_kernels_if_built() {
#if defined(__aarch64__)
    return &kNeon;
#else
    return nullptr;
#endif
}

}  // namespace btm::simd
