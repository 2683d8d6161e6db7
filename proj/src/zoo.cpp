#include "evolab/models/zoo.hpp"

#include <cmath>

#include "evolab/core/rng.hpp"

namespace evolab {

const char* task_kind_name(TaskKind kind) {
    switch (kind) {
        case TaskKind::classification: return "classification";
        case TaskKind::image_regression: return "image-regression";
        case TaskKind::e2l_classification: return "e2l-classification";
        case TaskKind::e2l_image: return "e2l-image";
    }
    return "?";
}

Model::Model(ModelSpec spec, std::vector<std::unique_ptr<Layer>> layers)
    : spec_(std::move(spec)), layers_(std::move(layers)) {
    // derive and pin the output shape
    Shape s = spec_.input_shape;
    for (const auto& l : layers_) s = l->out_shape(s);
    spec_.output_shape = s;
}

Tensor Model::forward(const Tensor& x, std::vector<LayerCache>* caches,
                      bool stop_before_softmax) const {
    if (x.rank() != spec_.input_shape.size() + 1) {
        throw DimensionError("model forward: expected batched input [N," +
                             shape_str(spec_.input_shape).substr(1) + ", got " + shape_str(x.shape));
    }
    for (std::size_t i = 0; i < spec_.input_shape.size(); ++i) {
        if (x.shape[i + 1] != spec_.input_shape[i]) {
            throw DimensionError("model forward: input " + shape_str(x.shape) +
                                 " does not match spec input " + shape_str(spec_.input_shape));
        }
    }
    std::size_t stop = layers_.size();
    if (stop_before_softmax) {
        if (!has_terminal_softmax()) {
            throw ArgumentError("model has no terminal softmax; cannot produce logits");
        }
        stop -= 1;
    }
    if (caches) caches->assign(layers_.size(), LayerCache{});
    Tensor cur = x;
    for (std::size_t i = 0; i < stop; ++i) {
        cur = layers_[i]->forward(cur, caches ? &(*caches)[i] : nullptr);
    }
    return cur;
}

Tensor Model::infer_one(const Tensor& x) const {
    Shape batched = x.shape;
    batched.insert(batched.begin(), 1);
    Tensor xb = x.reshaped(batched);
    Tensor y = forward(xb);
    Shape out(y.shape.begin() + 1, y.shape.end());
    return y.reshaped(out);
}

Tensor Model::backward(const std::vector<LayerCache>& caches, const Tensor& grad,
                       std::vector<Tensor>& param_grads, bool from_logits) const {
    if (caches.size() != layers_.size()) {
        throw ArgumentError("model backward: cache list does not match layer count");
    }
    std::size_t start = layers_.size();
    if (from_logits) {
        if (!has_terminal_softmax()) {
            throw ArgumentError("model has no terminal softmax; cannot backprop from logits");
        }
        start -= 1;
    }
    // map layer index -> slice of param_grads
    Tensor cur = grad;
    std::size_t grad_idx = param_grads.size();
    // count grads of skipped tail layers (softmax has none, but stay general)
    for (std::size_t i = layers_.size(); i > start; --i) {
        grad_idx -= const_cast<Layer&>(*layers_[i - 1]).params().size();
    }
    for (std::size_t i = start; i > 0; --i) {
        Layer& l = const_cast<Layer&>(*layers_[i - 1]);
        const std::size_t n_params = l.params().size();
        grad_idx -= n_params;
        cur = l.backward(caches[i - 1], cur,
                         std::span<Tensor>(param_grads.data() + grad_idx, n_params));
    }
    return cur;
}

std::vector<Tensor*> Model::params() {
    std::vector<Tensor*> out;
    for (auto& l : layers_) {
        for (Tensor* t : l->params()) out.push_back(t);
    }
    return out;
}

std::vector<const Tensor*> Model::params() const {
    std::vector<const Tensor*> out;
    for (const auto& l : layers_) {
        for (const Tensor* t : l->params()) out.push_back(t);
    }
    return out;
}

std::size_t Model::param_count() const {
    std::size_t n = 0;
    for (const Tensor* t : params()) n += t->numel();
    return n;
}

std::vector<Tensor> Model::make_grad_buffers() const {
    std::vector<Tensor> grads;
    for (const Tensor* t : params()) grads.emplace_back(t->shape);
    return grads;
}

bool Model::has_terminal_softmax() const {
    return !layers_.empty() && layers_.back()->kind() == LayerKind::softmax;
}

Checkpoint Model::snapshot() const {
    auto ps = params();
    return make_checkpoint(std::span<const Tensor* const>(ps.data(), ps.size()),
                           static_cast<std::uint32_t>(layers_.size()));
}

void Model::restore(const Checkpoint& ckpt) {
    if (ckpt.layer_count != layers_.size()) {
        throw CheckpointError("checkpoint was taken from a model with " +
                              std::to_string(ckpt.layer_count) + " layers, this model has " +
                              std::to_string(layers_.size()));
    }
    auto ps = params();
    apply_checkpoint(std::span<Tensor* const>(ps.data(), ps.size()), ckpt);
}

namespace {

// He-style fan-in scaled init for conv/dense weights; biases start at zero.
void init_params(std::vector<std::unique_ptr<Layer>>& layers, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x1717));
    for (auto& l : layers) {
        double fan_in = 0.0;
        switch (l->kind()) {
            case LayerKind::dense:
                fan_in = static_cast<double>(static_cast<DenseLayer&>(*l).in_features());
                break;
            case LayerKind::conv2d: {
                auto& c = static_cast<Conv2dLayer&>(*l);
                fan_in = static_cast<double>(c.in_c * c.k * c.k);
                break;
            }
            case LayerKind::tconv2d: {
                auto& c = static_cast<TConv2dLayer&>(*l);
                fan_in = static_cast<double>(c.in_c * c.k * c.k);
                break;
            }
            default:
                continue;
        }
        const double scale = std::sqrt(2.0 / fan_in);
        auto ps = l->params();
        for (double& v : ps[0]->data) v = scale * rng.normal();
        // ps[1] (bias) stays zero
    }
}

void require_divisible(std::size_t dim, std::size_t levels, const char* axis) {
    std::size_t d = dim;
    for (std::size_t i = 0; i < levels; ++i) {
        if (d % 2 != 0) {
            throw SpecError(std::string("encoder-decoder: ") + axis + " = " + std::to_string(dim) +
                            " is not divisible by 2^" + std::to_string(levels));
        }
        d /= 2;
    }
}

std::vector<std::unique_ptr<Layer>> encoder_decoder_stack(std::size_t in_channels, std::size_t h,
                                                          std::size_t w,
                                                          const std::vector<std::size_t>& widths) {
    if (widths.empty()) throw SpecError("encoder-decoder: at least one encoder width required");
    require_divisible(h, widths.size(), "H");
    require_divisible(w, widths.size(), "W");

    std::vector<std::unique_ptr<Layer>> layers;
    std::size_t c = in_channels;
    for (std::size_t width : widths) {
        layers.push_back(std::make_unique<Conv2dLayer>(c, width, 3, 1));
        layers.push_back(std::make_unique<ReluLayer>());
        layers.push_back(std::make_unique<MaxPool2x2Layer>());
        c = width;
    }
    for (std::size_t i = widths.size(); i-- > 1;) {
        layers.push_back(std::make_unique<TConv2dLayer>(widths[i], widths[i - 1], 4, 2, 1));
        layers.push_back(std::make_unique<ReluLayer>());
    }
    layers.push_back(std::make_unique<TConv2dLayer>(widths[0], 1, 4, 2, 1));
    layers.push_back(std::make_unique<ReluLayer>());  // heat maps are non-negative
    return layers;
}

}  // namespace

Model build_classifier(const ModelSpec& spec_in, std::uint64_t seed) {
    ModelSpec spec = spec_in;
    spec.task = TaskKind::classification;
    if (spec.input_shape.empty()) spec.input_shape = {1, 28, 28};
    if (spec.input_shape.size() != 3) {
        throw SpecError("classifier: input shape must be [C,H,W], got " + shape_str(spec.input_shape));
    }
    if (spec.classes < 2) throw SpecError("classifier: needs at least 2 classes");
    if (spec.conv1 == 0 || spec.conv2 == 0 || spec.fc1 == 0 || spec.fc2 == 0) {
        throw SpecError("classifier: all channel widths must be positive");
    }

    const std::size_t c = spec.input_shape[0], h = spec.input_shape[1], w = spec.input_shape[2];
    if (h < 16 || w < 16) throw SpecError("classifier: input spatial dims too small for 2 conv-pool stages");

    std::vector<std::unique_ptr<Layer>> layers;
    layers.push_back(std::make_unique<Conv2dLayer>(c, spec.conv1, 5, 0));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<MaxPool2x2Layer>());
    layers.push_back(std::make_unique<Conv2dLayer>(spec.conv1, spec.conv2, 5, 0));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<MaxPool2x2Layer>());
    const std::size_t h2 = ((h - 4) / 2 - 4) / 2;
    const std::size_t w2 = ((w - 4) / 2 - 4) / 2;
    layers.push_back(std::make_unique<DenseLayer>(spec.conv2 * h2 * w2, spec.fc1));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<DenseLayer>(spec.fc1, spec.fc2));
    layers.push_back(std::make_unique<ReluLayer>());
    layers.push_back(std::make_unique<DenseLayer>(spec.fc2, spec.classes));
    layers.push_back(std::make_unique<SoftmaxLayer>());

    init_params(layers, seed);
    return Model(std::move(spec), std::move(layers));
}

Model build_encoder_decoder(const ModelSpec& spec_in, std::uint64_t seed) {
    ModelSpec spec = spec_in;
    spec.task = TaskKind::image_regression;
    if (spec.input_shape.empty()) spec.input_shape = {2, 32, 32};
    if (spec.input_shape.size() != 3) {
        throw SpecError("encoder-decoder: input shape must be [C,H,W], got " +
                        shape_str(spec.input_shape));
    }
    auto layers = encoder_decoder_stack(spec.input_shape[0], spec.input_shape[1],
                                        spec.input_shape[2], spec.enc_widths);
    init_params(layers, seed);
    return Model(std::move(spec), std::move(layers));
}

Model build_e2l(const ModelSpec& primary_spec, TaskKind task, std::uint64_t seed) {
    if (task == TaskKind::e2l_image || task == TaskKind::image_regression) {
        ModelSpec spec = primary_spec;
        spec.task = TaskKind::e2l_image;
        if (spec.cube_depth < 2) throw SpecError("e2l-image: cube depth must be >= 2");
        if (spec.input_shape.size() != 3) {
            throw SpecError("e2l-image: primary input shape must be [C,H,W]");
        }
        // same architecture family, half the channels at every hidden stage
        std::vector<std::size_t> widths;
        for (std::size_t w : primary_spec.enc_widths) {
            if (w % 2 != 0) throw SpecError("e2l-image: primary widths must be even to halve");
            widths.push_back(w / 2);
        }
        spec.enc_widths = widths;
        spec.input_shape = {spec.cube_depth, primary_spec.input_shape[1],
                            primary_spec.input_shape[2]};
        auto layers = encoder_decoder_stack(spec.input_shape[0], spec.input_shape[1],
                                            spec.input_shape[2], widths);
        init_params(layers, seed);
        return Model(std::move(spec), std::move(layers));
    }
    if (task == TaskKind::e2l_classification || task == TaskKind::classification) {
        ModelSpec spec = primary_spec;
        spec.task = TaskKind::e2l_classification;
        const std::size_t t = spec.strip_steps, c = spec.classes;
        if (t < 4) throw SpecError("e2l-classification: strip needs at least 4 steps");
        spec.input_shape = {1, t, c};
        std::vector<std::unique_ptr<Layer>> layers;
        layers.push_back(std::make_unique<Conv2dLayer>(1, spec.e2l_conv1, 3, 1));
        layers.push_back(std::make_unique<ReluLayer>());
        layers.push_back(std::make_unique<MaxPool2x2Layer>());
        layers.push_back(std::make_unique<Conv2dLayer>(spec.e2l_conv1, spec.e2l_conv2, 3, 1));
        layers.push_back(std::make_unique<ReluLayer>());
        layers.push_back(std::make_unique<DenseLayer>(spec.e2l_conv2 * (t / 2) * (c / 2), spec.e2l_fc));
        layers.push_back(std::make_unique<ReluLayer>());
        layers.push_back(std::make_unique<DenseLayer>(spec.e2l_fc, c));
        layers.push_back(std::make_unique<SoftmaxLayer>());
        init_params(layers, seed);
        return Model(std::move(spec), std::move(layers));
    }
    throw SpecError("build_e2l: unsupported task kind");
}

Model build_model(const ModelSpec& spec, std::uint64_t seed) {
    switch (spec.task) {
        case TaskKind::classification: return build_classifier(spec, seed);
        case TaskKind::image_regression: return build_encoder_decoder(spec, seed);
        case TaskKind::e2l_classification: return build_e2l(spec, TaskKind::e2l_classification, seed);
        case TaskKind::e2l_image: {
            // spec already carries halved widths; rebuild the stack directly
            ModelSpec s = spec;
            auto layers = encoder_decoder_stack(s.input_shape[0], s.input_shape[1], s.input_shape[2],
                                                s.enc_widths);
            init_params(layers, seed);
            return Model(std::move(s), std::move(layers));
        }
    }
    throw SpecError("build_model: unknown task kind");
}

Model clone_model(const Model& m) {
    Model out = build_model(m.spec(), 0);
    out.restore(m.snapshot());
    return out;
}

}  // namespace evolab
