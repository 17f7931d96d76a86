#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>

#include "divad/tensor.hpp"

namespace divad::nn {

enum class LayerKind { conv, deconv, maxpool, batchnorm, relu, sigmoid };

struct Dims3 {
    int t = 1, h = 1, w = 1;
};

/// Layer description. Kernels are (t,h,w); the temporal extent is always 1,
/// frames in a window pass through every layer independently.
struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    Dims3 kernel{1, 1, 1};
    Dims3 stride{1, 1, 1};
    Dims3 padding{0, 0, 0};
    int channels_in = 1;
    int channels_out = 1;
    int output_padding = 0;  // deconv only, applied to both spatial axes

    static LayerSpec conv2d(int cin, int cout, int k = 3, int s = 1, int p = 1) {
        LayerSpec spec;
        spec.kind = LayerKind::conv;
        spec.kernel = {1, k, k};
        spec.stride = {1, s, s};
        spec.padding = {0, p, p};
        spec.channels_in = cin;
        spec.channels_out = cout;
        spec.validate();
        return spec;
    }

    static LayerSpec deconv2d(int cin, int cout, int k = 3, int s = 1, int p = 1,
                              int outpad = 0) {
        LayerSpec spec;
        spec.kind = LayerKind::deconv;
        spec.kernel = {1, k, k};
        spec.stride = {1, s, s};
        spec.padding = {0, p, p};
        spec.channels_in = cin;
        spec.channels_out = cout;
        spec.output_padding = outpad;
        spec.validate();
        return spec;
    }

    void validate() const {
        if (kind == LayerKind::conv || kind == LayerKind::deconv ||
            kind == LayerKind::maxpool) {
            if (kernel.t != 1)
                throw Error("layer spec: temporal kernel must be 1, got " +
                            std::to_string(kernel.t));
            if (kernel.h <= 0 || kernel.w <= 0 || stride.h <= 0 || stride.w <= 0)
                throw Error("layer spec: kernel and stride must be positive");
            if (padding.h < 0 || padding.w < 0)
                throw Error("layer spec: negative padding");
            if (padding.h >= kernel.h || padding.w >= kernel.w)
                throw Error("layer spec: padding must be smaller than kernel");
            if (channels_in <= 0 || channels_out <= 0)
                throw Error("layer spec: channel counts must be positive");
            if (output_padding < 0 || output_padding >= std::max(stride.h, stride.w))
                throw Error("layer spec: output_padding must be smaller than stride");
        }
    }
};

inline std::size_t conv_output_size(std::size_t in, int k, int s, int p) {
    long num = static_cast<long>(in) + 2L * p - k;
    if (num < 0)
        throw Error("conv: spatial size " + std::to_string(in) +
                    " too small for kernel " + std::to_string(k));
    return static_cast<std::size_t>(num / s + 1);
}

inline std::size_t deconv_output_size(std::size_t in, int k, int s, int p,
                                      int outpad) {
    long out = (static_cast<long>(in) - 1) * s - 2L * p + k + outpad;
    if (out <= 0) throw Error("deconv: nonpositive output size");
    return static_cast<std::size_t>(out);
}

namespace detail {

inline long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline long ceil_div(long a, long b) { return -floor_div(-a, b); }

template <typename T>
void check_conv_args(const Tensor<T>& input, const Tensor<T>& weights,
                     const LayerSpec& spec, const char* what) {
    if (input.rank() != 4)
        throw Error(std::string(what) + ": expected rank-4 input [C,F,H,W], got " +
                    shape_string(input.shape));
    if (input.dim(0) != static_cast<std::size_t>(spec.channels_in))
        throw Error(std::string(what) + ": shape mismatch on axis 0 (channels): got " +
                    std::to_string(input.dim(0)) + ", spec says " +
                    std::to_string(spec.channels_in));
    std::size_t w0 = weights.dim(0), w1 = weights.dim(1);
    std::size_t exp0 = spec.kind == LayerKind::conv
                           ? static_cast<std::size_t>(spec.channels_out)
                           : static_cast<std::size_t>(spec.channels_in);
    std::size_t exp1 = spec.kind == LayerKind::conv
                           ? static_cast<std::size_t>(spec.channels_in)
                           : static_cast<std::size_t>(spec.channels_out);
    if (weights.rank() != 4 || w0 != exp0 || w1 != exp1 ||
        weights.dim(2) != static_cast<std::size_t>(spec.kernel.h) ||
        weights.dim(3) != static_cast<std::size_t>(spec.kernel.w))
        throw Error(std::string(what) + ": weight shape " + shape_string(weights.shape) +
                    " does not match spec");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// conv2d: weights [C_out, C_in, kh, kw], bias [C_out]
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weights,
                         const Tensor<T>& bias, const LayerSpec& spec) {
    spec.validate();
    detail::check_conv_args(input, weights, spec, "conv2d");
    if (bias.size() != static_cast<std::size_t>(spec.channels_out))
        throw Error("conv2d: bias size mismatch");
    ensure_finite(input, "conv2d input");

    const std::size_t ci_n = input.dim(0), frames = input.dim(1);
    const std::size_t ih = input.dim(2), iw = input.dim(3);
    const int kh = spec.kernel.h, kw = spec.kernel.w;
    const int sh = spec.stride.h, sw = spec.stride.w;
    const int ph = spec.padding.h, pw = spec.padding.w;
    const std::size_t oh = conv_output_size(ih, kh, sh, ph);
    const std::size_t ow = conv_output_size(iw, kw, sw, pw);
    const std::size_t co_n = spec.channels_out;

    Tensor<T> out({co_n, frames, oh, ow});
    const T* wp = weights.ptr();
    for (std::size_t co = 0; co < co_n; ++co) {
        for (std::size_t f = 0; f < frames; ++f) {
            T* oslab = &out.at4(co, f, 0, 0);
            std::fill(oslab, oslab + oh * ow, bias.data[co]);
            for (std::size_t ci = 0; ci < ci_n; ++ci) {
                const T* islab = &input.at4(ci, f, 0, 0);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const T w = wp[((co * ci_n + ci) * kh + ky) * kw + kx];
                        if (w == T(0)) continue;
                        const long ox_lo = std::max(
                            0L, detail::ceil_div(pw - kx, sw));
                        const long ox_hi = std::min(
                            static_cast<long>(ow) - 1,
                            detail::floor_div(static_cast<long>(iw) - 1 + pw - kx, sw));
                        for (std::size_t oy = 0; oy < oh; ++oy) {
                            const long iy = static_cast<long>(oy) * sh + ky - ph;
                            if (iy < 0 || iy >= static_cast<long>(ih)) continue;
                            const T* irow = islab + iy * iw;
                            T* orow = oslab + oy * ow;
                            for (long ox = ox_lo; ox <= ox_hi; ++ox)
                                orow[ox] += w * irow[ox * sw + kx - pw];
                        }
                    }
                }
            }
        }
    }
    return out;
}

template <typename T>
struct ConvGrads {
    Tensor<T> input;
    Tensor<T> weights;
    Tensor<T> bias;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                             const Tensor<T>& weights, const LayerSpec& spec) {
    spec.validate();
    detail::check_conv_args(input, weights, spec, "conv2d backward");
    const std::size_t ci_n = input.dim(0), frames = input.dim(1);
    const std::size_t ih = input.dim(2), iw = input.dim(3);
    const int kh = spec.kernel.h, kw = spec.kernel.w;
    const int sh = spec.stride.h, sw = spec.stride.w;
    const int ph = spec.padding.h, pw = spec.padding.w;
    const std::size_t oh = conv_output_size(ih, kh, sh, ph);
    const std::size_t ow = conv_output_size(iw, kw, sw, pw);
    const std::size_t co_n = spec.channels_out;
    if (grad_out.shape != std::vector<std::size_t>{co_n, frames, oh, ow})
        throw Error("conv2d backward: grad shape " + shape_string(grad_out.shape) +
                    " does not match forward output " +
                    shape_string({co_n, frames, oh, ow}));

    ConvGrads<T> g{Tensor<T>(input.shape), Tensor<T>(weights.shape),
                   Tensor<T>({co_n})};
    const T* wp = weights.ptr();
    T* gwp = g.weights.ptr();
    for (std::size_t co = 0; co < co_n; ++co) {
        T gb = 0;
        for (std::size_t f = 0; f < frames; ++f) {
            const T* gslab = &grad_out.at4(co, f, 0, 0);
            for (std::size_t i = 0; i < oh * ow; ++i) gb += gslab[i];
            for (std::size_t ci = 0; ci < ci_n; ++ci) {
                const T* islab = &input.at4(ci, f, 0, 0);
                T* gislab = &g.input.at4(ci, f, 0, 0);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const std::size_t widx = ((co * ci_n + ci) * kh + ky) * kw + kx;
                        const T w = wp[widx];
                        T gw = 0;
                        const long ox_lo = std::max(
                            0L, detail::ceil_div(pw - kx, sw));
                        const long ox_hi = std::min(
                            static_cast<long>(ow) - 1,
                            detail::floor_div(static_cast<long>(iw) - 1 + pw - kx, sw));
                        for (std::size_t oy = 0; oy < oh; ++oy) {
                            const long iy = static_cast<long>(oy) * sh + ky - ph;
                            if (iy < 0 || iy >= static_cast<long>(ih)) continue;
                            const T* irow = islab + iy * iw;
                            T* girow = gislab + iy * iw;
                            const T* grow = gslab + oy * ow;
                            for (long ox = ox_lo; ox <= ox_hi; ++ox) {
                                const long ix = ox * sw + kx - pw;
                                gw += grow[ox] * irow[ix];
                                girow[ix] += w * grow[ox];
                            }
                        }
                        gwp[widx] += gw;
                    }
                }
            }
        }
        g.bias.data[co] = gb;
    }
    return g;
}

// ---------------------------------------------------------------------------
// deconv2d (transposed convolution): weights [C_in, C_out, kh, kw]
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> deconv2d_forward(const Tensor<T>& input, const Tensor<T>& weights,
                           const Tensor<T>& bias, const LayerSpec& spec) {
    spec.validate();
    detail::check_conv_args(input, weights, spec, "deconv2d");
    if (bias.size() != static_cast<std::size_t>(spec.channels_out))
        throw Error("deconv2d: bias size mismatch");
    ensure_finite(input, "deconv2d input");

    const std::size_t ci_n = input.dim(0), frames = input.dim(1);
    const std::size_t ih = input.dim(2), iw = input.dim(3);
    const int kh = spec.kernel.h, kw = spec.kernel.w;
    const int sh = spec.stride.h, sw = spec.stride.w;
    const int ph = spec.padding.h, pw = spec.padding.w;
    const std::size_t oh = deconv_output_size(ih, kh, sh, ph, spec.output_padding);
    const std::size_t ow = deconv_output_size(iw, kw, sw, pw, spec.output_padding);
    const std::size_t co_n = spec.channels_out;

    Tensor<T> out({co_n, frames, oh, ow});
    for (std::size_t co = 0; co < co_n; ++co) {
        for (std::size_t f = 0; f < frames; ++f) {
            T* oslab = &out.at4(co, f, 0, 0);
            std::fill(oslab, oslab + oh * ow, bias.data[co]);
        }
    }
    const T* wp = weights.ptr();
    for (std::size_t ci = 0; ci < ci_n; ++ci) {
        for (std::size_t co = 0; co < co_n; ++co) {
            for (std::size_t f = 0; f < frames; ++f) {
                const T* islab = &input.at4(ci, f, 0, 0);
                T* oslab = &out.at4(co, f, 0, 0);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const T w = wp[((ci * co_n + co) * kh + ky) * kw + kx];
                        if (w == T(0)) continue;
                        for (std::size_t iy = 0; iy < ih; ++iy) {
                            const long oy = static_cast<long>(iy) * sh + ky - ph;
                            if (oy < 0 || oy >= static_cast<long>(oh)) continue;
                            const T* irow = islab + iy * iw;
                            T* orow = oslab + oy * ow;
                            for (std::size_t ix = 0; ix < iw; ++ix) {
                                const long ox = static_cast<long>(ix) * sw + kx - pw;
                                if (ox < 0 || ox >= static_cast<long>(ow)) continue;
                                orow[ox] += w * irow[ix];
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

template <typename T>
ConvGrads<T> deconv2d_backward(const Tensor<T>& grad_out, const Tensor<T>& input,
                               const Tensor<T>& weights, const LayerSpec& spec) {
    spec.validate();
    detail::check_conv_args(input, weights, spec, "deconv2d backward");
    const std::size_t ci_n = input.dim(0), frames = input.dim(1);
    const std::size_t ih = input.dim(2), iw = input.dim(3);
    const int kh = spec.kernel.h, kw = spec.kernel.w;
    const int sh = spec.stride.h, sw = spec.stride.w;
    const int ph = spec.padding.h, pw = spec.padding.w;
    const std::size_t oh = deconv_output_size(ih, kh, sh, ph, spec.output_padding);
    const std::size_t ow = deconv_output_size(iw, kw, sw, pw, spec.output_padding);
    const std::size_t co_n = spec.channels_out;
    if (grad_out.shape != std::vector<std::size_t>{co_n, frames, oh, ow})
        throw Error("deconv2d backward: grad shape " + shape_string(grad_out.shape) +
                    " does not match forward output");

    ConvGrads<T> g{Tensor<T>(input.shape), Tensor<T>(weights.shape),
                   Tensor<T>({co_n})};
    for (std::size_t co = 0; co < co_n; ++co) {
        T gb = 0;
        for (std::size_t f = 0; f < frames; ++f) {
            const T* gslab = &grad_out.at4(co, f, 0, 0);
            for (std::size_t i = 0; i < oh * ow; ++i) gb += gslab[i];
        }
        g.bias.data[co] = gb;
    }
    const T* wp = weights.ptr();
    T* gwp = g.weights.ptr();
    for (std::size_t ci = 0; ci < ci_n; ++ci) {
        for (std::size_t co = 0; co < co_n; ++co) {
            for (std::size_t f = 0; f < frames; ++f) {
                const T* islab = &input.at4(ci, f, 0, 0);
                T* gislab = &g.input.at4(ci, f, 0, 0);
                const T* gslab = &grad_out.at4(co, f, 0, 0);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const std::size_t widx = ((ci * co_n + co) * kh + ky) * kw + kx;
                        const T w = wp[widx];
                        T gw = 0;
                        for (std::size_t iy = 0; iy < ih; ++iy) {
                            const long oy = static_cast<long>(iy) * sh + ky - ph;
                            if (oy < 0 || oy >= static_cast<long>(oh)) continue;
                            const T* irow = islab + iy * iw;
                            T* girow = gislab + iy * iw;
                            const T* grow = gslab + oy * ow;
                            for (std::size_t ix = 0; ix < iw; ++ix) {
                                const long ox = static_cast<long>(ix) * sw + kx - pw;
                                if (ox < 0 || ox >= static_cast<long>(ow)) continue;
                                gw += irow[ix] * grow[ox];
                                girow[ix] += w * grow[ox];
                            }
                        }
                        gwp[widx] += gw;
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// maxpool (1x2x2), stride (1x2x2)
// ---------------------------------------------------------------------------

template <typename T>
struct PoolResult {
    Tensor<T> out;
    std::vector<std::uint32_t> argmax;  // flat input index per output element
};

template <typename T>
PoolResult<T> maxpool2x2_forward(const Tensor<T>& input) {
    if (input.rank() != 4)
        throw Error("maxpool: expected rank-4 input, got " +
                    shape_string(input.shape));
    const std::size_t c_n = input.dim(0), frames = input.dim(1);
    const std::size_t ih = input.dim(2), iw = input.dim(3);
    if (ih % 2 != 0 || iw % 2 != 0)
        throw Error("maxpool: odd spatial size " + std::to_string(ih) + "x" +
                    std::to_string(iw));
    const std::size_t oh = ih / 2, ow = iw / 2;
    PoolResult<T> r{Tensor<T>({c_n, frames, oh, ow}),
                    std::vector<std::uint32_t>(c_n * frames * oh * ow)};
    std::size_t oi = 0;
    for (std::size_t c = 0; c < c_n; ++c) {
        for (std::size_t f = 0; f < frames; ++f) {
            const T* islab = &input.at4(c, f, 0, 0);
            const std::size_t base = (c * frames + f) * ih * iw;
            for (std::size_t oy = 0; oy < oh; ++oy) {
                const T* r0 = islab + (2 * oy) * iw;
                const T* r1 = r0 + iw;
                for (std::size_t ox = 0; ox < ow; ++ox, ++oi) {
                    const std::size_t x0 = 2 * ox;
                    T best = r0[x0];
                    std::size_t bi = (2 * oy) * iw + x0;
                    if (r0[x0 + 1] > best) { best = r0[x0 + 1]; bi = (2 * oy) * iw + x0 + 1; }
                    if (r1[x0] > best) { best = r1[x0]; bi = (2 * oy + 1) * iw + x0; }
                    if (r1[x0 + 1] > best) { best = r1[x0 + 1]; bi = (2 * oy + 1) * iw + x0 + 1; }
                    r.out.data[oi] = best;
                    r.argmax[oi] = static_cast<std::uint32_t>(base + bi);
                }
            }
        }
    }
    return r;
}

template <typename T>
Tensor<T> maxpool2x2_backward(const Tensor<T>& grad_out,
                              const std::vector<std::uint32_t>& argmax,
                              const std::vector<std::size_t>& input_shape) {
    if (grad_out.size() != argmax.size())
        throw Error("maxpool backward: grad/argmax size mismatch");
    Tensor<T> g(input_shape);
    for (std::size_t i = 0; i < argmax.size(); ++i)
        g.data[argmax[i]] += grad_out.data[i];
    return g;
}

// ---------------------------------------------------------------------------
// batchnorm (per channel over frames and spatial axes)
// ---------------------------------------------------------------------------

template <typename T>
struct BatchNormParams {
    Tensor<T> gamma, beta;         // learnable
    Tensor<T> running_mean, running_var;
    T momentum = T(0.1);
    T eps = T(1e-5);

    explicit BatchNormParams(std::size_t channels = 0)
        : gamma({channels}), beta({channels}), running_mean({channels}),
          running_var({channels}) {
        gamma.fill(T(1));
        running_var.fill(T(1));
    }
};

template <typename T>
struct BatchNormCache {
    Tensor<T> x_hat;
    std::vector<T> inv_std;  // per channel
};

namespace detail {
template <typename T>
void check_bn_input(const Tensor<T>& input, const BatchNormParams<T>& params) {
    if (input.rank() != 4)
        throw Error("batchnorm: expected rank-4 input");
    if (params.gamma.size() != input.dim(0))
        throw Error("batchnorm: channel count mismatch on axis 0");
}
}  // namespace detail

/// Train mode: normalizes with batch statistics, updates running stats and
/// fills the cache needed for the backward pass.
template <typename T>
Tensor<T> batchnorm_train_forward(const Tensor<T>& input,
                                  BatchNormParams<T>& params,
                                  BatchNormCache<T>& cache) {
    detail::check_bn_input(input, params);
    const std::size_t c_n = input.dim(0);
    const std::size_t per = input.size() / c_n;
    Tensor<T> out(input.shape);
    cache.x_hat = Tensor<T>(input.shape);
    cache.inv_std.assign(c_n, T(0));
    for (std::size_t c = 0; c < c_n; ++c) {
        const T* x = input.ptr() + c * per;
        T* y = out.ptr() + c * per;
        double m = 0;
        for (std::size_t i = 0; i < per; ++i) m += x[i];
        m /= static_cast<double>(per);
        double v = 0;
        for (std::size_t i = 0; i < per; ++i) {
            const double d = x[i] - m;
            v += d * d;
        }
        v /= static_cast<double>(per);
        const T mean = static_cast<T>(m);
        const T var = static_cast<T>(v);
        params.running_mean.data[c] =
            (T(1) - params.momentum) * params.running_mean.data[c] +
            params.momentum * mean;
        params.running_var.data[c] =
            (T(1) - params.momentum) * params.running_var.data[c] +
            params.momentum * var;
        const T inv_std = T(1) / std::sqrt(var + params.eps);
        const T g = params.gamma.data[c], b = params.beta.data[c];
        T* xh = cache.x_hat.ptr() + c * per;
        cache.inv_std[c] = inv_std;
        for (std::size_t i = 0; i < per; ++i) {
            xh[i] = (x[i] - mean) * inv_std;
            y[i] = g * xh[i] + b;
        }
    }
    return out;
}

/// Eval mode: pure function of the running statistics.
template <typename T>
Tensor<T> batchnorm_eval_forward(const Tensor<T>& input,
                                 const BatchNormParams<T>& params) {
    detail::check_bn_input(input, params);
    const std::size_t c_n = input.dim(0);
    const std::size_t per = input.size() / c_n;
    Tensor<T> out(input.shape);
    for (std::size_t c = 0; c < c_n; ++c) {
        const T* x = input.ptr() + c * per;
        T* y = out.ptr() + c * per;
        const T inv_std =
            T(1) / std::sqrt(params.running_var.data[c] + params.eps);
        const T g = params.gamma.data[c], b = params.beta.data[c];
        const T mean = params.running_mean.data[c];
        for (std::size_t i = 0; i < per; ++i)
            y[i] = g * (x[i] - mean) * inv_std + b;
    }
    return out;
}

template <typename T>
struct BatchNormGrads {
    Tensor<T> input, gamma, beta;
};

/// Training-mode backward; accounts for the batch statistics' dependence on
/// the input.
template <typename T>
BatchNormGrads<T> batchnorm_backward(const Tensor<T>& grad_out,
                                     const BatchNormParams<T>& params,
                                     const BatchNormCache<T>& cache) {
    const std::size_t c_n = grad_out.dim(0);
    const std::size_t per = grad_out.size() / c_n;
    BatchNormGrads<T> g{Tensor<T>(grad_out.shape), Tensor<T>({c_n}),
                        Tensor<T>({c_n})};
    for (std::size_t c = 0; c < c_n; ++c) {
        const T* go = grad_out.ptr() + c * per;
        const T* xh = cache.x_hat.ptr() + c * per;
        T* gi = g.input.ptr() + c * per;
        double sum_go = 0, sum_go_xh = 0;
        for (std::size_t i = 0; i < per; ++i) {
            sum_go += go[i];
            sum_go_xh += go[i] * xh[i];
        }
        g.beta.data[c] = static_cast<T>(sum_go);
        g.gamma.data[c] = static_cast<T>(sum_go_xh);
        const T scale = params.gamma.data[c] * cache.inv_std[c];
        const T mean_go = static_cast<T>(sum_go / per);
        const T mean_go_xh = static_cast<T>(sum_go_xh / per);
        for (std::size_t i = 0; i < per; ++i)
            gi[i] = scale * (go[i] - mean_go - xh[i] * mean_go_xh);
    }
    return g;
}

// ---------------------------------------------------------------------------
// elementwise activations
// ---------------------------------------------------------------------------

template <typename T>
Tensor<T> relu_forward(const Tensor<T>& input) {
    Tensor<T> out(input.shape);
    for (std::size_t i = 0; i < input.size(); ++i)
        out.data[i] = input.data[i] > T(0) ? input.data[i] : T(0);
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& grad_out, const Tensor<T>& input) {
    ensure_same_shape(grad_out, input, "relu backward");
    Tensor<T> g(input.shape);
    for (std::size_t i = 0; i < input.size(); ++i)
        g.data[i] = input.data[i] > T(0) ? grad_out.data[i] : T(0);
    return g;
}

template <typename T>
Tensor<T> sigmoid_forward(const Tensor<T>& input) {
    Tensor<T> out(input.shape);
    for (std::size_t i = 0; i < input.size(); ++i)
        out.data[i] = T(1) / (T(1) + std::exp(-input.data[i]));
    return out;
}

/// Takes the forward *output* (sigmoid'(x) = y(1-y)).
template <typename T>
Tensor<T> sigmoid_backward(const Tensor<T>& grad_out, const Tensor<T>& output) {
    ensure_same_shape(grad_out, output, "sigmoid backward");
    Tensor<T> g(output.shape);
    for (std::size_t i = 0; i < output.size(); ++i)
        g.data[i] = grad_out.data[i] * output.data[i] * (T(1) - output.data[i]);
    return g;
}

}  // namespace divad::nn
