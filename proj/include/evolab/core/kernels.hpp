#pragma once

#include <cstddef>
#include <string>

namespace evolab::kern {

// Per-call scalars for the fused ADAM element update. Bias corrections are
// precomputed by the caller (they depend on the step count, not the element).
struct AdamParams {
    double lr;
    double beta1;
    double beta2;
    double eps;
    double bias1;      // 1 - beta1^t
    double bias2;      // 1 - beta2^t
    double wd_factor;  // 1 - lr * weight_decay, applied before the ADAM delta
};

// Table of hot inner-loop kernels. Every entry has a scalar reference
// implementation and may have SIMD variants. All variants are required to be
// bit-identical to the reference: per-element accumulation chains have a
// fixed order, SIMD only runs independent elements in parallel, and no FMA
// contraction is used anywhere.
struct Ops {
    const char* name;

    // c[m x n] = a[m x k] * b[k x n], c overwritten.
    // Summation per output element is strictly k = 0..K-1.
    void (*matmul)(std::size_t m, std::size_t k, std::size_t n, const double* a, const double* b,
                   double* c);

    void (*add)(const double* x, const double* y, double* out, std::size_t n);
    void (*sub)(const double* x, const double* y, double* out, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
    void (*scale)(double a, double* x, std::size_t n);                  // x *= a
    void (*relu_fwd)(const double* x, double* y, std::size_t n);
    void (*relu_bwd)(const double* x, const double* gy, double* gx, std::size_t n);
    void (*adam_update)(double* p, const double* g, double* m, double* v, std::size_t n,
                        const AdamParams& ap);
};

const Ops& scalar_ops();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

bool avx2_supported();

// Active table. Picked once: AVX2 when available, scalar otherwise.
// Overridable via EVOLAB_KERNELS=scalar|avx2 or set_active().
const Ops& ops();
void set_active(const std::string& name);  // "scalar" | "avx2" | "auto"
std::string active_name();

}  // namespace evolab::kern
