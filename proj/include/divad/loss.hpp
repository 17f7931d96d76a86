#pragma once

#include "divad/tensor.hpp"

namespace divad {

enum class DepthNormalization { none, max_to_one };

/// Per-pixel depth weights. A single SxS grid broadcasts over every frame of
/// a window; a full WxSxS stack weights frames individually. The exponent is
/// applied as z^exponent before weighting (1 by default, 2 for the exact
/// depth-invariance setting).
template <typename T>
struct DepthWeights {
    Tensor<T> z;  // rank 2 (SxS) or rank 3 (WxSxS)
    T exponent = T(1);
    DepthNormalization normalization = DepthNormalization::max_to_one;

    DepthWeights() = default;
    DepthWeights(Tensor<T> grid, T exp_ = T(1),
                 DepthNormalization norm = DepthNormalization::max_to_one)
        : z(std::move(grid)), exponent(exp_), normalization(norm) {
        validate();
        if (normalization == DepthNormalization::max_to_one) {
            T zmax = T(0);
            for (T v : z.data) zmax = std::max(zmax, v);
            for (T& v : z.data) v /= zmax;
        }
    }

    void validate() const {
        if (z.rank() != 2 && z.rank() != 3)
            throw Error("depth weights: expected SxS or WxSxS grid, got " +
                        shape_string(z.shape));
        bool any_positive = false;
        for (T v : z.data) {
            if (!(v >= T(0)))
                throw Error("depth weights: negative or non-finite weight");
            if (v > T(0)) any_positive = true;
        }
        if (!any_positive) throw Error("depth weights: all weights are zero");
    }

    /// Effective weight for frame-local pixel (y, x); the frame index only
    /// matters for per-frame stacks.
    T at(std::size_t frame, std::size_t y, std::size_t x) const {
        T v = z.rank() == 2 ? z.at3(0, y, x) : z.at3(frame, y, x);
        return weight_of(v);
    }

    T weight_of(T depth) const {
        if (exponent == T(1)) return depth;
        if (exponent == T(2)) return depth * depth;
        return std::pow(depth, exponent);
    }

    /// All-ones weights; depth-weighted loss reduces to plain MSE.
    static DepthWeights unit(std::size_t s) {
        Tensor<T> grid({s, s});
        grid.fill(T(1));
        return DepthWeights(std::move(grid), T(1), DepthNormalization::none);
    }
};

namespace detail {

template <typename T>
void check_pair(const Tensor<T>& input, const Tensor<T>& output) {
    ensure_same_shape(input, output, "reconstruction pair");
    ensure_finite(input, "reconstruction input");
    ensure_finite(output, "reconstruction output");
    if (input.rank() != 3)
        throw Error("reconstruction pair: expected WxSxS windows, got " +
                    shape_string(input.shape));
}

template <typename T>
void check_broadcast(const Tensor<T>& input, const DepthWeights<T>& w) {
    const std::size_t s_y = input.dim(1), s_x = input.dim(2);
    const std::size_t zy = w.z.dim(w.z.rank() - 2), zx = w.z.dim(w.z.rank() - 1);
    if (zy != s_y || zx != s_x)
        throw Error("depth weights: spatial grid " + shape_string(w.z.shape) +
                    " does not match window " + shape_string(input.shape));
    if (w.z.rank() == 3 && w.z.dim(0) != input.dim(0))
        throw Error("depth weights: per-frame stack length " +
                    std::to_string(w.z.dim(0)) + " does not match window frames " +
                    std::to_string(input.dim(0)));
}

}  // namespace detail

/// Plain mean squared reconstruction error over a WxSxS window.
template <typename T>
T mse_loss(const Tensor<T>& input, const Tensor<T>& output) {
    detail::check_pair(input, output);
    double acc = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double d = static_cast<double>(input.data[i]) - output.data[i];
        acc += d * d;
    }
    return static_cast<T>(acc / static_cast<double>(input.size()));
}

/// Depth-weighted mean squared error: (1/N_e) sum z^exp * (I - O)^2 with
/// N_e the plain pixel count of the window.
template <typename T>
T depth_weighted_mse(const Tensor<T>& input, const Tensor<T>& output,
                     const DepthWeights<T>& weights) {
    detail::check_pair(input, output);
    weights.validate();
    detail::check_broadcast(input, weights);
    const std::size_t frames = input.dim(0), s_y = input.dim(1), s_x = input.dim(2);
    double acc = 0;
    std::size_t i = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t y = 0; y < s_y; ++y) {
            for (std::size_t x = 0; x < s_x; ++x, ++i) {
                const double d =
                    static_cast<double>(input.data[i]) - output.data[i];
                acc += static_cast<double>(weights.at(f, y, x)) * d * d;
            }
        }
    }
    return static_cast<T>(acc / static_cast<double>(input.size()));
}

/// dL/dO for the depth-weighted MSE: -2 z^exp (I - O) / N_e.
template <typename T>
Tensor<T> depth_weighted_mse_backward(const Tensor<T>& input,
                                      const Tensor<T>& output,
                                      const DepthWeights<T>& weights) {
    detail::check_pair(input, output);
    weights.validate();
    detail::check_broadcast(input, weights);
    const std::size_t frames = input.dim(0), s_y = input.dim(1), s_x = input.dim(2);
    const T inv_n = T(1) / static_cast<T>(input.size());
    Tensor<T> grad(input.shape);
    std::size_t i = 0;
    for (std::size_t f = 0; f < frames; ++f)
        for (std::size_t y = 0; y < s_y; ++y)
            for (std::size_t x = 0; x < s_x; ++x, ++i)
                grad.data[i] = T(-2) * weights.at(f, y, x) *
                               (input.data[i] - output.data[i]) * inv_n;
    return grad;
}

}  // namespace divad
