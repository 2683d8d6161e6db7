#pragma once

// Test-side oracles, independent of the implementation paths they check.

#include <cmath>
#include <functional>
#include <vector>

#include "evolab/core/layers.hpp"
#include "evolab/core/rng.hpp"
#include "evolab/core/tensor.hpp"

namespace oracle {

inline evolab::Tensor random_tensor(evolab::Shape shape, evolab::Rng& rng, double scale = 1.0) {
    evolab::Tensor t(std::move(shape));
    for (double& v : t.data) v = scale * rng.normal();
    return t;
}

// Naive triple-loop matrix product, the reference for the matmul kernels.
inline evolab::Tensor matmul_naive(const evolab::Tensor& a, const evolab::Tensor& b) {
    const std::size_t m = a.shape[0], k = a.shape[1], n = b.shape[1];
    evolab::Tensor c({m, n});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t kk = 0; kk < k; ++kk) s += a.data[i * k + kk] * b.data[kk * n + j];
            c.data[i * n + j] = s;
        }
    return c;
}

// max |a-n| / max(|a|,|n|,floor) over all entries
inline double max_rel_err(const std::vector<double>& analytic, const std::vector<double>& numeric,
                          double floor = 1e-6) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric[i]), floor});
        worst = std::max(worst, std::fabs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

// Central-difference gradient of scalar(v) w.r.t. the entries of v.
inline std::vector<double> central_diff(std::vector<double>& v,
                                        const std::function<double()>& scalar, double h = 1e-5) {
    std::vector<double> grad(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double saved = v[i];
        v[i] = saved + h;
        const double fp = scalar();
        v[i] = saved - h;
        const double fm = scalar();
        v[i] = saved;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

// max |a-n| over all entries
inline double max_abs_err(const std::vector<double>& analytic, const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst, std::fabs(analytic[i] - numeric[i]));
    }
    return worst;
}

// Like max_rel_err, but entries where the central-difference estimate is not
// self-consistent across step sizes h and h/2 are skipped: piecewise-linear
// activations (relu, max_pool) make finite differences unreliable exactly at
// their kinks, which says nothing about the analytic gradient.
inline double max_rel_err_filtered(const std::vector<double>& analytic, std::vector<double>& v,
                                   const std::function<double()>& scalar, double h = 1e-5,
                                   double floor = 1e-6) {
    const std::vector<double> g1 = central_diff(v, scalar, h);
    const std::vector<double> g2 = central_diff(v, scalar, h / 2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        if (std::fabs(g1[i] - g2[i]) > 1e-6 * std::max(1.0, std::fabs(g1[i]))) continue;
        const double denom = std::max({std::fabs(analytic[i]), std::fabs(g1[i]), floor});
        worst = std::max(worst, std::fabs(analytic[i] - g1[i]) / denom);
    }
    return worst;
}

struct GradCheckResult {
    double input_err;
    double param_err;
};

// Checks layer.backward against central differences of
// f = sum(weights ⊙ layer.forward(x)) for both the input and every parameter.
inline GradCheckResult grad_check_layer(evolab::Layer& layer, evolab::Tensor x, evolab::Rng& rng,
                                        double h = 1e-5) {
    evolab::LayerCache cache;
    evolab::Tensor y = layer.forward(x, &cache);
    evolab::Tensor weights = random_tensor(y.shape, rng);

    auto scalar = [&]() {
        evolab::Tensor out = layer.forward(x, nullptr);
        double s = 0.0;
        for (std::size_t i = 0; i < out.numel(); ++i) s += weights.data[i] * out.data[i];
        return s;
    };

    std::vector<evolab::Tensor> param_grads;
    for (evolab::Tensor* p : layer.params()) param_grads.emplace_back(p->shape);
    evolab::Tensor dx = layer.backward(cache, weights, param_grads);

    GradCheckResult r{0.0, 0.0};
    r.input_err = max_rel_err(dx.data, central_diff(x.data, scalar, h));
    for (std::size_t pi = 0; pi < param_grads.size(); ++pi) {
        evolab::Tensor* p = layer.params()[pi];
        r.param_err = std::max(r.param_err, max_rel_err(param_grads[pi].data,
                                                        central_diff(p->data, scalar, h)));
    }
    return r;
}

}  // namespace oracle
