// AVX2 variants of the kernel-engine inner loops. This TU is compiled with
// -mavx2 and must only be entered after cpu_supports_avx2() returned true.
// Per-element operation order matches the scalar reference exactly
// (mul/add, no FMA), so results are bit-identical to it.

#include "btm/simd.hpp"

#include <immintrin.h>

namespace btm::simd {

namespace {

void tridiag_step_avx2(double* out, const double* in, const double* stay, const double* hop,
                       std::size_t n) {
    if (n < 6) {
        scalar_kernels().tridiag_step(out, in, stay, hop, n);
        return;
    }
    out[0] = in[0] * stay[0] + in[1] * hop[1];
    std::size_t i = 1;
    for (; i + 4 < n; i += 4) {
        __m256d c = _mm256_loadu_pd(in + i);
        __m256d l = _mm256_loadu_pd(in + i - 1);
        __m256d r = _mm256_loadu_pd(in + i + 1);
        __m256d d = _mm256_loadu_pd(stay + i);
        __m256d hl = _mm256_loadu_pd(hop + i - 1);
        __m256d hr = _mm256_loadu_pd(hop + i + 1);
        __m256d res = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(c, d), _mm256_mul_pd(l, hl)), _mm256_mul_pd(r, hr));
        _mm256_storeu_pd(out + i, res);
    }
    for (; i + 1 < n; ++i)
        out[i] = (in[i] * stay[i] + in[i - 1] * hop[i - 1]) + in[i + 1] * hop[i + 1];
    out[n - 1] = in[n - 1] * stay[n - 1] + in[n - 2] * hop[n - 2];
}

void axpy_avx2(double* acc, const double* x, double w, std::size_t n) {
    __m256d vw = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(acc + i);
        __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(vw, v)));
    }
    for (; i < n; ++i) acc[i] = acc[i] + w * x[i];
}

const Kernels kAvx2{tridiag_step_avx2, axpy_avx2, "avx2"};

}  // namespace

const Kernels* avx2_kernels_if_built() { return &kAvx2; }

}  // namespace btm::simd
