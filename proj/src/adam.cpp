#include "evolab/core/adam.hpp"

#include <cmath>

#include "evolab/core/kernels.hpp"

namespace evolab {

void SolverConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ArgumentError("solver: learning_rate must be > 0");
    if (weight_decay < 0.0) throw ArgumentError("solver: weight_decay must be >= 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ArgumentError("solver: beta1 must be in [0,1)");
    if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ArgumentError("solver: beta2 must be in [0,1)");
    if (!(epsilon > 0.0)) throw ArgumentError("solver: epsilon must be > 0");
}

AdamState AdamState::init(std::span<Tensor* const> params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor* p : params) {
        s.m.emplace_back(p->shape);
        s.v.emplace_back(p->shape);
    }
    return s;
}

void adam_step(std::span<Tensor* const> params, std::span<const Tensor> grads, AdamState& state,
               const SolverConfig& cfg) {
    cfg.validate();
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw DimensionError("adam_step: params/grads/state are not congruent");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        require_same_shape(*params[i], grads[i], "adam_step");
        require_same_shape(*params[i], state.m[i], "adam_step state");
        if (!grads[i].all_finite()) {
            throw NumericError("adam_step: non-finite gradient in parameter tensor " +
                               std::to_string(i));
        }
    }

    state.t += 1;
    kern::AdamParams ap;
    ap.lr = cfg.learning_rate;
    ap.beta1 = cfg.beta1;
    ap.beta2 = cfg.beta2;
    ap.eps = cfg.epsilon;
    ap.bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    ap.bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    ap.wd_factor = 1.0 - cfg.learning_rate * cfg.weight_decay;

    for (std::size_t i = 0; i < params.size(); ++i) {
        kern::ops().adam_update(params[i]->data.data(), grads[i].data.data(), state.m[i].data.data(),
                                state.v[i].data.data(), params[i]->numel(), ap);
    }
}

}  // namespace evolab
