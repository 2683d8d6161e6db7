#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "evolab/core/tensor.hpp"

namespace evolab {

enum class LayerKind { dense, relu, conv2d, max_pool, tconv2d, softmax };

const char* layer_kind_name(LayerKind kind);

// Activation state produced by forward and consumed by the matching backward.
// Owned by the caller so a model can run inference passes (cache = nullptr)
// without disturbing an in-flight training step.
struct LayerCache {
    Tensor input;
    Tensor cols;                         // conv2d: im2col patches, [N, C*k*k, OH*OW]
    Tensor output;                       // softmax keeps its output
    std::vector<std::uint32_t> argmax;   // max_pool winner indices
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual LayerKind kind() const = 0;

    // x is batched: [N, ...per-sample dims...].
    virtual Tensor forward(const Tensor& x, LayerCache* cache) const = 0;

    // Returns the gradient w.r.t. the layer input and accumulates parameter
    // gradients into param_grads (ordered like params()).
    virtual Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                            std::span<Tensor> param_grads) const = 0;

    virtual std::vector<Tensor*> params() { return {}; }
    virtual std::vector<const Tensor*> params() const { return {}; }

    // Per-sample shape propagation, used by model builders for validation.
    virtual Shape out_shape(const Shape& in) const = 0;
};

class DenseLayer final : public Layer {
public:
    DenseLayer(std::size_t in_features, std::size_t out_features);

    LayerKind kind() const override { return LayerKind::dense; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    std::vector<Tensor*> params() override { return {&w, &b}; }
    std::vector<const Tensor*> params() const override { return {&w, &b}; }
    Shape out_shape(const Shape& in) const override;

    std::size_t in_features() const { return in_f_; }
    std::size_t out_features() const { return out_f_; }

    Tensor w;  // [in, out]
    Tensor b;  // [out]

private:
    std::size_t in_f_, out_f_;
};

class ReluLayer final : public Layer {
public:
    LayerKind kind() const override { return LayerKind::relu; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    Shape out_shape(const Shape& in) const override { return in; }
};

// 2-D convolution, stride 1, symmetric zero padding.
class Conv2dLayer final : public Layer {
public:
    Conv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t ksize,
                std::size_t pad);

    LayerKind kind() const override { return LayerKind::conv2d; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    std::vector<Tensor*> params() override { return {&w, &b}; }
    std::vector<const Tensor*> params() const override { return {&w, &b}; }
    Shape out_shape(const Shape& in) const override;

    Tensor w;  // [out_c, in_c*k*k]
    Tensor b;  // [out_c]

    std::size_t in_c, out_c, k, pad;
};

// 2x2 max pooling, stride 2; odd trailing rows/columns are dropped.
class MaxPool2x2Layer final : public Layer {
public:
    LayerKind kind() const override { return LayerKind::max_pool; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    Shape out_shape(const Shape& in) const override;
};

// Transposed 2-D convolution (upsampling): OH = stride*(IH-1) + k - 2*pad.
class TConv2dLayer final : public Layer {
public:
    TConv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t ksize,
                 std::size_t stride, std::size_t pad);

    LayerKind kind() const override { return LayerKind::tconv2d; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    std::vector<Tensor*> params() override { return {&w, &b}; }
    std::vector<const Tensor*> params() const override { return {&w, &b}; }
    Shape out_shape(const Shape& in) const override;

    Tensor w;  // [in_c, out_c*k*k]
    Tensor b;  // [out_c]

    std::size_t in_c, out_c, k, stride, pad;
};

// Row-wise softmax over the last axis, numerically stabilized by max-shift.
class SoftmaxLayer final : public Layer {
public:
    LayerKind kind() const override { return LayerKind::softmax; }
    Tensor forward(const Tensor& x, LayerCache* cache) const override;
    Tensor backward(const LayerCache& cache, const Tensor& grad_out,
                    std::span<Tensor> param_grads) const override;
    Shape out_shape(const Shape& in) const override { return in; }
};

// [m x n] -> [n x m] copy.
Tensor transpose2d(const Tensor& t, std::size_t m, std::size_t n);

}  // namespace evolab
