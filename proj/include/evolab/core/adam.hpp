#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evolab/core/tensor.hpp"

namespace evolab {

struct SolverConfig {
    double learning_rate = 1e-4;
    double weight_decay = 0.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const;
};

struct AdamState {
    std::int64_t t = 0;
    std::vector<Tensor> m;
    std::vector<Tensor> v;

    static AdamState init(std::span<Tensor* const> params);
};

// Bias-corrected ADAM with decoupled weight decay: params are first scaled by
// (1 - lr*weight_decay), then the ADAM delta is applied. Throws NumericError
// on non-finite gradients.
void adam_step(std::span<Tensor* const> params, std::span<const Tensor> grads, AdamState& state,
               const SolverConfig& cfg);

}  // namespace evolab
