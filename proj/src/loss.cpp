#include "evolab/core/loss.hpp"

#include <algorithm>
#include <cmath>

#include "evolab/core/kernels.hpp"

namespace evolab {

LossGrad softmax_cross_entropy(const Tensor& logits, std::span<const int> targets) {
    if (logits.rank() != 1 && logits.rank() != 2) {
        throw DimensionError("softmax_cross_entropy: expected [C] or [N,C] logits, got " +
                             shape_str(logits.shape));
    }
    const std::size_t c = logits.shape.back();
    const std::size_t n = logits.rank() == 2 ? logits.shape[0] : 1;
    if (targets.size() != n) {
        throw DimensionError("softmax_cross_entropy: " + std::to_string(n) + " rows but " +
                             std::to_string(targets.size()) + " targets");
    }

    Tensor grad(logits.shape);
    double total = 0.0;
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const int target = targets[r];
        if (target < 0 || static_cast<std::size_t>(target) >= c) {
            throw IndexError("softmax_cross_entropy: target class " + std::to_string(target) +
                             " out of range [0," + std::to_string(c) + ")");
        }
        const double* in = logits.data.data() + r * c;
        double* g = grad.data.data() + r * c;
        double mx = in[0];
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, in[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            g[j] = std::exp(in[j] - mx);
            denom += g[j];
        }
        total += (std::log(denom) - (in[target] - mx));
        const double inv = 1.0 / denom;
        for (std::size_t j = 0; j < c; ++j) g[j] = g[j] * inv * invn;
        g[target] -= invn;
    }
    return {total * invn, std::move(grad)};
}

LossGrad softmax_cross_entropy(const Tensor& logits, int target) {
    const int t[1] = {target};
    return softmax_cross_entropy(logits, std::span<const int>(t, 1));
}

LossGrad mse_loss(const Tensor& pred, const Tensor& target) {
    require_same_shape(pred, target, "mse_loss");
    const std::size_t n = pred.numel();
    Tensor diff(pred.shape);
    kern::ops().sub(pred.data.data(), target.data.data(), diff.data.data(), n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += diff.data[i] * diff.data[i];
    const double scale = 2.0 / static_cast<double>(n);
    kern::ops().scale(scale, diff.data.data(), n);
    return {total / static_cast<double>(n), std::move(diff)};
}

}  // namespace evolab
