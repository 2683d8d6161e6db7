#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evolab/core/checkpoint.hpp"
#include "evolab/core/layers.hpp"

namespace evolab {

enum class TaskKind { classification, image_regression, e2l_classification, e2l_image };

const char* task_kind_name(TaskKind kind);

struct ModelSpec {
    TaskKind task = TaskKind::classification;
    Shape input_shape;   // per-sample, e.g. {1,28,28} or {2,32,32}
    Shape output_shape;  // derived by the builders

    // classification widths (LeNet-style)
    std::size_t conv1 = 6;
    std::size_t conv2 = 16;
    std::size_t fc1 = 120;
    std::size_t fc2 = 84;
    std::size_t classes = 10;

    // image-regression encoder widths; the decoder mirrors them
    std::vector<std::size_t> enc_widths = {16, 32, 64};

    // e2l inputs: cube depth for the image task, (T, C) strip for classification
    std::size_t cube_depth = 15;
    std::size_t strip_steps = 30;

    // e2l classification stack widths
    std::size_t e2l_conv1 = 8;
    std::size_t e2l_conv2 = 16;
    std::size_t e2l_fc = 84;
};

class Model {
public:
    Model(ModelSpec spec, std::vector<std::unique_ptr<Layer>> layers);

    const ModelSpec& spec() const { return spec_; }
    std::size_t layer_count() const { return layers_.size(); }
    const Layer& layer(std::size_t i) const { return *layers_[i]; }

    // Batched forward: x is [N, ...input_shape]. caches may be null for
    // inference. stop_before_softmax yields logits for the fused CE loss.
    Tensor forward(const Tensor& x, std::vector<LayerCache>* caches = nullptr,
                   bool stop_before_softmax = false) const;

    // Forward for one sample (adds/drops the batch axis).
    Tensor infer_one(const Tensor& x) const;

    // Backpropagates grad (w.r.t. output or logits) through the stack,
    // accumulating into param_grads. Returns the gradient w.r.t. the input.
    Tensor backward(const std::vector<LayerCache>& caches, const Tensor& grad,
                    std::vector<Tensor>& param_grads, bool from_logits = false) const;

    std::vector<Tensor*> params();
    std::vector<const Tensor*> params() const;
    std::size_t param_count() const;
    std::vector<Tensor> make_grad_buffers() const;

    bool has_terminal_softmax() const;

    Checkpoint snapshot() const;
    void restore(const Checkpoint& ckpt);

private:
    ModelSpec spec_;
    std::vector<std::unique_ptr<Layer>> layers_;
};

// LeNet-style stack: 2x (conv 5x5 valid, relu, pool) + dense 120/84 + softmax.
Model build_classifier(const ModelSpec& spec, std::uint64_t seed);

// 3-level conv encoder (3x3 pad 1, relu, pool) + mirrored transposed-conv
// decoder (4x4 stride 2 pad 1, relu) ending in a non-negative heat map.
Model build_encoder_decoder(const ModelSpec& spec, std::uint64_t seed);

// Thin evolution-to-label variants: image task reuses the encoder-decoder at
// half width with cube_depth input channels; classification consumes the
// [T x C] strip as a one-channel image.
Model build_e2l(const ModelSpec& primary_spec, TaskKind task, std::uint64_t seed);

Model build_model(const ModelSpec& spec, std::uint64_t seed);

// Same architecture and parameters, freshly allocated.
Model clone_model(const Model& m);

}  // namespace evolab
