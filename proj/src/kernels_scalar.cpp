#include <cmath>
#include <cstring>

#include "evolab/core/kernels.hpp"

// Reference kernels. These define the numerical contract: SIMD variants must
// reproduce them bit for bit. Keep the per-element operation order explicit.

namespace evolab::kern {

namespace {

void matmul_scalar(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
                   double* c) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = arow[kk];
            const double* brow = b + kk * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] = crow[j] + aik * brow[j];
            }
        }
    }
}

void add_scalar(const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_scalar(const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void relu_fwd_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_bwd_scalar(const double* x, const double* gy, double* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
}

void adam_update_scalar(double* p, const double* g, double* m, double* v, std::size_t n,
                        const AdamParams& ap) {
    const double omb1 = 1.0 - ap.beta1;
    const double omb2 = 1.0 - ap.beta2;
    for (std::size_t i = 0; i < n; ++i) {
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

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        "scalar",        matmul_scalar, add_scalar,      sub_scalar,
        axpy_scalar,     scale_scalar,  relu_fwd_scalar, relu_bwd_scalar,
        adam_update_scalar,
    };
    return table;
}

}  // namespace evolab::kern
