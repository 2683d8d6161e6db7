// AVX2 variants of the hot kernels. This translation unit is the only one
// compiled with -mavx2; entry is gated at runtime by avx2_supported().
//
// Bit-exact equivalence with the scalar reference relies on:
//  - vectorization across independent output elements only (j lanes),
//  - mul followed by add, never fmadd (different rounding),
//  - identical scalar tail loops for n % 4 remainders.

#include "evolab/core/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define EVOLAB_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define EVOLAB_HAVE_AVX2_BUILD 0
#endif

#include <cmath>
#include <cstring>

namespace evolab::kern {

#if EVOLAB_HAVE_AVX2_BUILD

namespace {

void matmul_avx2(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
                 double* c) {
    std::memset(c, 0, m * n * sizeof(double));
    const std::size_t n4 = n & ~std::size_t(3);
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = arow[kk];
            const double* brow = b + kk * n;
            const __m256d va = _mm256_set1_pd(aik);
            std::size_t j = 0;
            for (; j < n4; j += 4) {
                __m256d vb = _mm256_loadu_pd(brow + j);
                __m256d vc = _mm256_loadu_pd(crow + j);
                vc = _mm256_add_pd(vc, _mm256_mul_pd(va, vb));
                _mm256_storeu_pd(crow + j, vc);
            }
            for (; j < n; ++j) {
                crow[j] = crow[j] + aik * brow[j];
            }
        }
    }
}

void add_avx2(const double* x, const double* y, double* out, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_avx2(const double* x, const double* y, double* out, std::size_t n) {
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) out[i] = x[i] - y[i];
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    }
    for (; i < n; ++i) x[i] *= a;
}

void relu_fwd_avx2(const double* x, double* y, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
    }
    for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd_avx2(const double* x, const double* gy, double* gx, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GT_OQ);
        _mm256_storeu_pd(gx + i, _mm256_and_pd(_mm256_loadu_pd(gy + i), mask));
    }
    for (; i < n; ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
}

void adam_update_avx2(double* p, const double* g, double* m, double* v, std::size_t n,
                      const AdamParams& ap) {
    const __m256d vb1 = _mm256_set1_pd(ap.beta1);
    const __m256d vb2 = _mm256_set1_pd(ap.beta2);
    const __m256d vomb1 = _mm256_set1_pd(1.0 - ap.beta1);
    const __m256d vomb2 = _mm256_set1_pd(1.0 - ap.beta2);
    const __m256d vbias1 = _mm256_set1_pd(ap.bias1);
    const __m256d vbias2 = _mm256_set1_pd(ap.bias2);
    const __m256d vlr = _mm256_set1_pd(ap.lr);
    const __m256d veps = _mm256_set1_pd(ap.eps);
    const __m256d vwdf = _mm256_set1_pd(ap.wd_factor);
    const std::size_t n4 = n & ~std::size_t(3);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d gi = _mm256_loadu_pd(g + i);
        const __m256d mi = _mm256_add_pd(_mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(vomb1, gi));
        const __m256d vi = _mm256_add_pd(_mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(vomb2, _mm256_mul_pd(gi, gi)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d mhat = _mm256_div_pd(mi, vbias1);
        const __m256d vhat = _mm256_div_pd(vi, vbias2);
        const __m256d pw = _mm256_mul_pd(_mm256_loadu_pd(p + i), vwdf);
        const __m256d step = _mm256_mul_pd(
            vlr, _mm256_div_pd(mhat, _mm256_add_pd(_mm256_sqrt_pd(vhat), veps)));
        _mm256_storeu_pd(p + i, _mm256_sub_pd(pw, step));
    }
    const double omb1 = 1.0 - ap.beta1;
    const double omb2 = 1.0 - ap.beta2;
    for (; i < n; ++i) {
        const double gi = g[i];
        const double mi = ap.beta1 * m[i] + omb1 * gi;
        const double vi = ap.beta2 * v[i] + omb2 * (gi * gi);
        m[i] = mi;
        v[i] = vi;
        const double mhat = mi / ap.bias1;
        const double vhat = vi / ap.bias2;
        const double pw = p[i] * ap.wd_factor;
        p[i] = pw - ap.lr * (mhat / (std::sqrt(vhat) + ap.eps));
    }
}

const Ops avx2_table = {
    "avx2",    matmul_avx2, add_avx2,      sub_avx2,      axpy_avx2,
    scale_avx2, relu_fwd_avx2, relu_bwd_avx2, adam_update_avx2,
};

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const Ops* avx2_ops() { return avx2_supported() ? &avx2_table : nullptr; }

#else  // !EVOLAB_HAVE_AVX2_BUILD

bool avx2_supported() { return false; }
const Ops* avx2_ops() { return nullptr; }

#endif

}  // namespace evolab::kern
