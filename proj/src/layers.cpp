#include "evolab/core/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "evolab/core/kernels.hpp"

namespace evolab {

const char* layer_kind_name(LayerKind kind) {
    switch (kind) {
        case LayerKind::dense: return "dense";
        case LayerKind::relu: return "relu";
        case LayerKind::conv2d: return "conv2d";
        case LayerKind::max_pool: return "max_pool";
        case LayerKind::tconv2d: return "tconv2d";
        case LayerKind::softmax: return "softmax";
    }
    return "?";
}

Tensor transpose2d(const Tensor& t, std::size_t m, std::size_t n) {
    Tensor out({n, m});
    const double* src = t.data.data();
    double* dst = out.data.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dst[j * m + i] = src[i * n + j];
        }
    }
    return out;
}

namespace {

std::size_t batch_of(const Tensor& x) {
    if (x.rank() < 2) throw DimensionError("batched tensor must have rank >= 2, got " + shape_str(x.shape));
    return x.shape[0];
}

void check_nchw(const Tensor& x, std::size_t channels, const char* what) {
    if (x.rank() != 4) {
        throw DimensionError(std::string(what) + ": expected [N,C,H,W] input, got " + shape_str(x.shape));
    }
    if (x.shape[1] != channels) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(channels) +
                             " input channels, got " + std::to_string(x.shape[1]));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// dense

DenseLayer::DenseLayer(std::size_t in_features, std::size_t out_features)
    : w({in_features, out_features}), b({out_features}), in_f_(in_features), out_f_(out_features) {}

Shape DenseLayer::out_shape(const Shape& in) const {
    if (numel_of(in) != in_f_) {
        throw DimensionError("dense: per-sample input " + shape_str(in) + " has " +
                             std::to_string(numel_of(in)) + " features, layer expects " +
                             std::to_string(in_f_));
    }
    return {out_f_};
}

Tensor DenseLayer::forward(const Tensor& x, LayerCache* cache) const {
    const std::size_t n = batch_of(x);
    if (x.numel() != n * in_f_) {
        throw DimensionError("dense: input " + shape_str(x.shape) + " does not provide " +
                             std::to_string(in_f_) + " features per sample");
    }
    Tensor y({n, out_f_});
    kern::ops().matmul(n, in_f_, out_f_, x.data.data(), w.data.data(), y.data.data());
    for (std::size_t i = 0; i < n; ++i) {
        kern::ops().add(y.data.data() + i * out_f_, b.data.data(), y.data.data() + i * out_f_, out_f_);
    }
    if (cache) cache->input = x;
    return y;
}

Tensor DenseLayer::backward(const LayerCache& cache, const Tensor& grad_out,
                            std::span<Tensor> param_grads) const {
    const Tensor& x = cache.input;
    const std::size_t n = batch_of(x);
    require_shape(grad_out, {n, out_f_}, "dense backward");

    // dW = x^T * gy
    Tensor x2d = x.reshaped({n, in_f_});
    Tensor xt = transpose2d(x2d, n, in_f_);
    Tensor dw({in_f_, out_f_});
    kern::ops().matmul(in_f_, n, out_f_, xt.data.data(), grad_out.data.data(), dw.data.data());
    kern::ops().add(param_grads[0].data.data(), dw.data.data(), param_grads[0].data.data(), dw.numel());

    // db = column sums of gy
    for (std::size_t i = 0; i < n; ++i) {
        kern::ops().add(param_grads[1].data.data(), grad_out.data.data() + i * out_f_,
                        param_grads[1].data.data(), out_f_);
    }

    // dx = gy * w^T
    Tensor wt = transpose2d(w, in_f_, out_f_);
    Tensor dx({n, in_f_});
    kern::ops().matmul(n, out_f_, in_f_, grad_out.data.data(), wt.data.data(), dx.data.data());
    return dx.reshaped(x.shape);
}

// ---------------------------------------------------------------------------
// relu

Tensor ReluLayer::forward(const Tensor& x, LayerCache* cache) const {
    Tensor y(x.shape);
    kern::ops().relu_fwd(x.data.data(), y.data.data(), x.numel());
    if (cache) cache->input = x;
    return y;
}

Tensor ReluLayer::backward(const LayerCache& cache, const Tensor& grad_out,
                           std::span<Tensor>) const {
    require_same_shape(cache.input, grad_out, "relu backward");
    Tensor gx(cache.input.shape);
    kern::ops().relu_bwd(cache.input.data.data(), grad_out.data.data(), gx.data.data(), gx.numel());
    return gx;
}

// ---------------------------------------------------------------------------
// conv2d (stride 1) via im2col + matmul

Conv2dLayer::Conv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t ksize,
                         std::size_t pad_)
    : w({out_channels, in_channels * ksize * ksize}),
      b({out_channels}),
      in_c(in_channels),
      out_c(out_channels),
      k(ksize),
      pad(pad_) {
    if (ksize == 0) throw SpecError("conv2d: kernel size must be positive");
}

Shape Conv2dLayer::out_shape(const Shape& in) const {
    if (in.size() != 3 || in[0] != in_c) {
        throw DimensionError("conv2d: expected per-sample shape [" + std::to_string(in_c) +
                             ",H,W], got " + shape_str(in));
    }
    const std::size_t h = in[1] + 2 * pad, w_ = in[2] + 2 * pad;
    if (h < k || w_ < k) throw DimensionError("conv2d: input smaller than kernel");
    return {out_c, h - k + 1, w_ - k + 1};
}

namespace {

// patches: [C*k*k, OH*OW], column-major over output positions
void im2col(const double* x, std::size_t c, std::size_t h, std::size_t w, std::size_t k,
            std::size_t pad, std::size_t oh, std::size_t ow, double* patches) {
    for (std::size_t ch = 0; ch < c; ++ch) {
        for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
                double* row = patches + ((ch * k + ky) * k + kx) * (oh * ow);
                for (std::size_t y = 0; y < oh; ++y) {
                    const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) -
                                              static_cast<std::ptrdiff_t>(pad);
                    for (std::size_t xo = 0; xo < ow; ++xo) {
                        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(xo + kx) -
                                                  static_cast<std::ptrdiff_t>(pad);
                        double v = 0.0;
                        if (iy >= 0 && iy < static_cast<std::ptrdiff_t>(h) && ix >= 0 &&
                            ix < static_cast<std::ptrdiff_t>(w)) {
                            v = x[(ch * h + iy) * w + ix];
                        }
                        row[y * ow + xo] = v;
                    }
                }
            }
        }
    }
}

void col2im(const double* patches, std::size_t c, std::size_t h, std::size_t w, std::size_t k,
            std::size_t pad, std::size_t oh, std::size_t ow, double* x) {
    for (std::size_t ch = 0; ch < c; ++ch) {
        for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
                const double* row = patches + ((ch * k + ky) * k + kx) * (oh * ow);
                for (std::size_t y = 0; y < oh; ++y) {
                    const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(y + ky) -
                                              static_cast<std::ptrdiff_t>(pad);
                    if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
                    for (std::size_t xo = 0; xo < ow; ++xo) {
                        const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(xo + kx) -
                                                  static_cast<std::ptrdiff_t>(pad);
                        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                        x[(ch * h + iy) * w + ix] += row[y * ow + xo];
                    }
                }
            }
        }
    }
}

}  // namespace

Tensor Conv2dLayer::forward(const Tensor& x, LayerCache* cache) const {
    check_nchw(x, in_c, "conv2d");
    const std::size_t n = x.shape[0], h = x.shape[2], w_ = x.shape[3];
    const Shape os = out_shape({in_c, h, w_});
    const std::size_t oh = os[1], ow = os[2], ohow = oh * ow, ck2 = in_c * k * k;

    Tensor y({n, out_c, oh, ow});
    Tensor cols({n, ck2, ohow});
    for (std::size_t i = 0; i < n; ++i) {
        double* patch = cols.data.data() + i * ck2 * ohow;
        im2col(x.data.data() + i * in_c * h * w_, in_c, h, w_, k, pad, oh, ow, patch);
        double* yi = y.data.data() + i * out_c * ohow;
        kern::ops().matmul(out_c, ck2, ohow, w.data.data(), patch, yi);
        for (std::size_t oc = 0; oc < out_c; ++oc) {
            const double bias = b.data[oc];
            double* ch = yi + oc * ohow;
            for (std::size_t j = 0; j < ohow; ++j) ch[j] += bias;
        }
    }
    if (cache) {
        cache->input = x;
        cache->cols = std::move(cols);
    }
    return y;
}

Tensor Conv2dLayer::backward(const LayerCache& cache, const Tensor& grad_out,
                             std::span<Tensor> param_grads) const {
    const Tensor& x = cache.input;
    const std::size_t n = x.shape[0], h = x.shape[2], w_ = x.shape[3];
    const Shape os = out_shape({in_c, h, w_});
    const std::size_t oh = os[1], ow = os[2], ohow = oh * ow, ck2 = in_c * k * k;
    require_shape(grad_out, {n, out_c, oh, ow}, "conv2d backward");

    Tensor wt = transpose2d(w, out_c, ck2);  // [ck2, out_c]
    Tensor dx(x.shape);
    Tensor dw_local({out_c, ck2});
    Tensor dcols({ck2, ohow});
    for (std::size_t i = 0; i < n; ++i) {
        const double* gy = grad_out.data.data() + i * out_c * ohow;
        const double* patch = cache.cols.data.data() + i * ck2 * ohow;

        // dW += gy_i * cols_i^T
        Tensor colsT({ohow, ck2});
        for (std::size_t r = 0; r < ck2; ++r)
            for (std::size_t cidx = 0; cidx < ohow; ++cidx)
                colsT.data[cidx * ck2 + r] = patch[r * ohow + cidx];
        kern::ops().matmul(out_c, ohow, ck2, gy, colsT.data.data(), dw_local.data.data());
        kern::ops().add(param_grads[0].data.data(), dw_local.data.data(), param_grads[0].data.data(),
                        dw_local.numel());

        // db += spatial sums per output channel
        for (std::size_t oc = 0; oc < out_c; ++oc) {
            double s = param_grads[1].data[oc];
            const double* ch = gy + oc * ohow;
            for (std::size_t j = 0; j < ohow; ++j) s += ch[j];
            param_grads[1].data[oc] = s;
        }

        // dx_i = col2im(w^T * gy_i)
        kern::ops().matmul(ck2, out_c, ohow, wt.data.data(), gy, dcols.data.data());
        col2im(dcols.data.data(), in_c, h, w_, k, pad, oh, ow, dx.data.data() + i * in_c * h * w_);
    }
    return dx;
}

// ---------------------------------------------------------------------------
// max_pool 2x2

Shape MaxPool2x2Layer::out_shape(const Shape& in) const {
    if (in.size() != 3) throw DimensionError("max_pool: expected per-sample [C,H,W], got " + shape_str(in));
    if (in[1] < 2 || in[2] < 2) throw DimensionError("max_pool: spatial dims must be >= 2");
    return {in[0], in[1] / 2, in[2] / 2};
}

Tensor MaxPool2x2Layer::forward(const Tensor& x, LayerCache* cache) const {
    if (x.rank() != 4) throw DimensionError("max_pool: expected [N,C,H,W], got " + shape_str(x.shape));
    const std::size_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3];
    const std::size_t oh = h / 2, ow = w / 2;
    if (oh == 0 || ow == 0) throw DimensionError("max_pool: spatial dims must be >= 2");

    Tensor y({n, c, oh, ow});
    std::vector<std::uint32_t> argmax(y.numel());
    const double* src = x.data.data();
    double* dst = y.data.data();
    std::size_t oi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t ch = 0; ch < c; ++ch) {
            const double* plane = src + (i * c + ch) * h * w;
            for (std::size_t y0 = 0; y0 < oh; ++y0) {
                for (std::size_t x0 = 0; x0 < ow; ++x0) {
                    const std::size_t base = (2 * y0) * w + 2 * x0;
                    std::size_t best = base;
                    double bv = plane[base];
                    const std::size_t cands[3] = {base + 1, base + w, base + w + 1};
                    for (std::size_t cand : cands) {
                        if (plane[cand] > bv) {
                            bv = plane[cand];
                            best = cand;
                        }
                    }
                    dst[oi] = bv;
                    argmax[oi] = static_cast<std::uint32_t>((i * c + ch) * h * w + best);
                    ++oi;
                }
            }
        }
    }
    if (cache) {
        cache->input = x;
        cache->argmax = std::move(argmax);
    }
    return y;
}

Tensor MaxPool2x2Layer::backward(const LayerCache& cache, const Tensor& grad_out,
                                 std::span<Tensor>) const {
    if (grad_out.numel() != cache.argmax.size()) {
        throw DimensionError("max_pool backward: gradient shape mismatch");
    }
    Tensor gx(cache.input.shape);
    for (std::size_t i = 0; i < cache.argmax.size(); ++i) {
        gx.data[cache.argmax[i]] += grad_out.data[i];
    }
    return gx;
}

// ---------------------------------------------------------------------------
// transposed conv2d

TConv2dLayer::TConv2dLayer(std::size_t in_channels, std::size_t out_channels, std::size_t ksize,
                           std::size_t stride_, std::size_t pad_)
    : w({in_channels, out_channels * ksize * ksize}),
      b({out_channels}),
      in_c(in_channels),
      out_c(out_channels),
      k(ksize),
      stride(stride_),
      pad(pad_) {
    if (ksize == 0 || stride_ == 0) throw SpecError("tconv2d: kernel size and stride must be positive");
}

Shape TConv2dLayer::out_shape(const Shape& in) const {
    if (in.size() != 3 || in[0] != in_c) {
        throw DimensionError("tconv2d: expected per-sample shape [" + std::to_string(in_c) +
                             ",H,W], got " + shape_str(in));
    }
    const std::size_t full_h = stride * (in[1] - 1) + k;
    const std::size_t full_w = stride * (in[2] - 1) + k;
    if (full_h < 2 * pad + 1 || full_w < 2 * pad + 1) {
        throw DimensionError("tconv2d: padding too large for input size");
    }
    return {out_c, full_h - 2 * pad, full_w - 2 * pad};
}

Tensor TConv2dLayer::forward(const Tensor& x, LayerCache* cache) const {
    check_nchw(x, in_c, "tconv2d");
    const std::size_t n = x.shape[0], ih = x.shape[2], iw = x.shape[3];
    const Shape os = out_shape({in_c, ih, iw});
    const std::size_t oh = os[1], ow = os[2];
    const std::size_t ihiw = ih * iw, ock2 = out_c * k * k;

    Tensor wt = transpose2d(w, in_c, ock2);  // [ock2, in_c]
    Tensor y({n, out_c, oh, ow});
    Tensor cols({ock2, ihiw});
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data.data() + i * in_c * ihiw;
        kern::ops().matmul(ock2, in_c, ihiw, wt.data.data(), xi, cols.data.data());
        double* yi = y.data.data() + i * out_c * oh * ow;
        for (std::size_t oc = 0; oc < out_c; ++oc) {
            for (std::size_t ky = 0; ky < k; ++ky) {
                for (std::size_t kx = 0; kx < k; ++kx) {
                    const double* row = cols.data.data() + ((oc * k + ky) * k + kx) * ihiw;
                    for (std::size_t yy = 0; yy < ih; ++yy) {
                        const std::ptrdiff_t oy = static_cast<std::ptrdiff_t>(yy * stride + ky) -
                                                  static_cast<std::ptrdiff_t>(pad);
                        if (oy < 0 || oy >= static_cast<std::ptrdiff_t>(oh)) continue;
                        for (std::size_t xx = 0; xx < iw; ++xx) {
                            const std::ptrdiff_t ox = static_cast<std::ptrdiff_t>(xx * stride + kx) -
                                                      static_cast<std::ptrdiff_t>(pad);
                            if (ox < 0 || ox >= static_cast<std::ptrdiff_t>(ow)) continue;
                            yi[(oc * oh + oy) * ow + ox] += row[yy * iw + xx];
                        }
                    }
                }
            }
            const double bias = b.data[oc];
            double* ch = yi + oc * oh * ow;
            for (std::size_t j = 0; j < oh * ow; ++j) ch[j] += bias;
        }
    }
    if (cache) cache->input = x;
    return y;
}

Tensor TConv2dLayer::backward(const LayerCache& cache, const Tensor& grad_out,
                              std::span<Tensor> param_grads) const {
    const Tensor& x = cache.input;
    const std::size_t n = x.shape[0], ih = x.shape[2], iw = x.shape[3];
    const Shape os = out_shape({in_c, ih, iw});
    const std::size_t oh = os[1], ow = os[2];
    const std::size_t ihiw = ih * iw, ock2 = out_c * k * k;
    require_shape(grad_out, {n, out_c, oh, ow}, "tconv2d backward");

    Tensor dx(x.shape);
    Tensor gcols({ock2, ihiw});
    Tensor dw_local({in_c, ock2});
    for (std::size_t i = 0; i < n; ++i) {
        const double* gy = grad_out.data.data() + i * out_c * oh * ow;
        // gather: gcols[(oc,ky,kx),(ih,iw)] = gy[oc, ih*s+ky-p, iw*s+kx-p]
        for (std::size_t oc = 0; oc < out_c; ++oc) {
            for (std::size_t ky = 0; ky < k; ++ky) {
                for (std::size_t kx = 0; kx < k; ++kx) {
                    double* row = gcols.data.data() + ((oc * k + ky) * k + kx) * ihiw;
                    for (std::size_t yy = 0; yy < ih; ++yy) {
                        const std::ptrdiff_t oy = static_cast<std::ptrdiff_t>(yy * stride + ky) -
                                                  static_cast<std::ptrdiff_t>(pad);
                        for (std::size_t xx = 0; xx < iw; ++xx) {
                            const std::ptrdiff_t ox = static_cast<std::ptrdiff_t>(xx * stride + kx) -
                                                      static_cast<std::ptrdiff_t>(pad);
                            double v = 0.0;
                            if (oy >= 0 && oy < static_cast<std::ptrdiff_t>(oh) && ox >= 0 &&
                                ox < static_cast<std::ptrdiff_t>(ow)) {
                                v = gy[(oc * oh + oy) * ow + ox];
                            }
                            row[yy * iw + xx] = v;
                        }
                    }
                }
            }
        }

        const double* xi = x.data.data() + i * in_c * ihiw;

        // dW += x_i * gcols^T
        Tensor gcolsT = transpose2d(gcols, ock2, ihiw);
        kern::ops().matmul(in_c, ihiw, ock2, xi, gcolsT.data.data(), dw_local.data.data());
        kern::ops().add(param_grads[0].data.data(), dw_local.data.data(), param_grads[0].data.data(),
                        dw_local.numel());

        // db += spatial sums per output channel
        for (std::size_t oc = 0; oc < out_c; ++oc) {
            double s = param_grads[1].data[oc];
            const double* ch = gy + oc * oh * ow;
            for (std::size_t j = 0; j < oh * ow; ++j) s += ch[j];
            param_grads[1].data[oc] = s;
        }

        // dx_i = w * gcols
        kern::ops().matmul(in_c, ock2, ihiw, w.data.data(), gcols.data.data(),
                           dx.data.data() + i * in_c * ihiw);
    }
    return dx;
}

// ---------------------------------------------------------------------------
// softmax

Tensor SoftmaxLayer::forward(const Tensor& x, LayerCache* cache) const {
    if (x.rank() < 2) throw DimensionError("softmax: expected [N,...,C], got " + shape_str(x.shape));
    const std::size_t c = x.shape.back();
    const std::size_t rows = x.numel() / c;
    Tensor y(x.shape);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* in = x.data.data() + r * c;
        double* out = y.data.data() + r * c;
        double mx = in[0];
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, in[j]);
        double denom = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
            out[j] = std::exp(in[j] - mx);
            denom += out[j];
        }
        const double inv = 1.0 / denom;
        for (std::size_t j = 0; j < c; ++j) out[j] *= inv;
    }
    if (cache) cache->output = y;
    return y;
}

Tensor SoftmaxLayer::backward(const LayerCache& cache, const Tensor& grad_out,
                              std::span<Tensor>) const {
    const Tensor& y = cache.output;
    require_same_shape(y, grad_out, "softmax backward");
    const std::size_t c = y.shape.back();
    const std::size_t rows = y.numel() / c;
    Tensor gx(y.shape);
    for (std::size_t r = 0; r < rows; ++r) {
        const double* s = y.data.data() + r * c;
        const double* gy = grad_out.data.data() + r * c;
        double dot = 0.0;
        for (std::size_t j = 0; j < c; ++j) dot += gy[j] * s[j];
        double* out = gx.data.data() + r * c;
        for (std::size_t j = 0; j < c; ++j) out[j] = s[j] * (gy[j] - dot);
    }
    return gx;
}

}  // namespace evolab
