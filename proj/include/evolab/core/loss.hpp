#pragma once

#include <span>

#include "evolab/core/tensor.hpp"

namespace evolab {

struct LossGrad {
    double loss;
    Tensor grad;
};

// logits: [C] with a single target, or [N,C] with one target per row.
// loss = mean over rows of -log softmax(logits)[target]
// grad  = (softmax(logits) - onehot(target)) / N, stabilized by max-shift.
LossGrad softmax_cross_entropy(const Tensor& logits, std::span<const int> targets);
LossGrad softmax_cross_entropy(const Tensor& logits, int target);

// loss = mean of squared elementwise differences, grad = 2*(pred-target)/numel
LossGrad mse_loss(const Tensor& pred, const Tensor& target);

}  // namespace evolab
