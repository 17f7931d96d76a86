#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "divad/nn.hpp"
#include "divad/tensor.hpp"

namespace divad {

/// Encoder-decoder convolutional autoencoder over frame windows.
///
/// Encoder: 3 conv blocks (3x3 conv, stride 1, pad 1 -> batchnorm -> relu)
/// with 2x2 maxpool after blocks 1 and 2, so a 64x64 input bottlenecks at
/// 16x16. Decoder: 3 transposed convs (stride 1, 2, 2) back to full
/// resolution, sigmoid output. Every layer treats the frames of a window
/// independently (temporal kernel 1).
template <typename T>
class DepCae {
public:
    struct Cache {
        Tensor<T> x0;                       // network input
        Tensor<T> r1, p1, r2, p2, r3;       // encoder intermediates
        Tensor<T> e1, e2, y;                // decoder intermediates
        nn::BatchNormCache<T> bn1, bn2, bn3;
        std::vector<std::uint32_t> pool1, pool2;
        std::vector<std::size_t> r1_shape, r2_shape;
    };

    using NamedParams = std::vector<std::pair<std::string, Tensor<T>*>>;
    using NamedGrads = std::vector<std::pair<std::string, Tensor<T>>>;

    DepCae(std::vector<int> channel_plan, std::size_t image_size,
           std::uint64_t seed)
        : plan_(std::move(channel_plan)), image_size_(image_size), seed_(seed) {
        if (plan_.size() != 3)
            throw Error("model: channel plan must list 3 block widths, got " +
                        std::to_string(plan_.size()));
        for (int c : plan_)
            if (c <= 0) throw Error("model: channel plan entries must be positive");
        if (image_size_ < 8 || image_size_ % 4 != 0)
            throw Error("model: image size must be a multiple of 4 and >= 8");

        const int c1 = plan_[0], c2 = plan_[1], c3 = plan_[2];
        enc1_ = nn::LayerSpec::conv2d(1, c1);
        enc2_ = nn::LayerSpec::conv2d(c1, c2);
        enc3_ = nn::LayerSpec::conv2d(c2, c3);
        dec1_ = nn::LayerSpec::deconv2d(c3, c2, 3, 1, 1, 0);
        dec2_ = nn::LayerSpec::deconv2d(c2, c1, 3, 2, 1, 1);
        dec3_ = nn::LayerSpec::deconv2d(c1, 1, 3, 2, 1, 1);

        Rng rng(seed);
        w_enc1_ = init_conv(rng, c1, 1);
        w_enc2_ = init_conv(rng, c2, c1);
        w_enc3_ = init_conv(rng, c3, c2);
        b_enc1_ = Tensor<T>({static_cast<std::size_t>(c1)});
        b_enc2_ = Tensor<T>({static_cast<std::size_t>(c2)});
        b_enc3_ = Tensor<T>({static_cast<std::size_t>(c3)});
        bn1_ = nn::BatchNormParams<T>(c1);
        bn2_ = nn::BatchNormParams<T>(c2);
        bn3_ = nn::BatchNormParams<T>(c3);
        w_dec1_ = init_deconv(rng, c3, c2);
        w_dec2_ = init_deconv(rng, c2, c1);
        w_dec3_ = init_deconv(rng, c1, 1);
        b_dec1_ = Tensor<T>({static_cast<std::size_t>(c2)});
        b_dec2_ = Tensor<T>({static_cast<std::size_t>(c1)});
        b_dec3_ = Tensor<T>({1});
    }

    const std::vector<int>& channel_plan() const { return plan_; }
    std::size_t image_size() const { return image_size_; }
    std::uint64_t seed() const { return seed_; }

    std::size_t param_count() const {
        return w_enc1_.size() + w_enc2_.size() + w_enc3_.size() +
               b_enc1_.size() + b_enc2_.size() + b_enc3_.size() +
               w_dec1_.size() + w_dec2_.size() + w_dec3_.size() +
               b_dec1_.size() + b_dec2_.size() + b_dec3_.size() +
               2 * (bn1_.gamma.size() + bn2_.gamma.size() + bn3_.gamma.size());
    }

    /// Trainable parameters in a fixed order.
    NamedParams named_params() {
        return {
            {"enc1.w", &w_enc1_}, {"enc1.b", &b_enc1_},
            {"bn1.gamma", &bn1_.gamma}, {"bn1.beta", &bn1_.beta},
            {"enc2.w", &w_enc2_}, {"enc2.b", &b_enc2_},
            {"bn2.gamma", &bn2_.gamma}, {"bn2.beta", &bn2_.beta},
            {"enc3.w", &w_enc3_}, {"enc3.b", &b_enc3_},
            {"bn3.gamma", &bn3_.gamma}, {"bn3.beta", &bn3_.beta},
            {"dec1.w", &w_dec1_}, {"dec1.b", &b_dec1_},
            {"dec2.w", &w_dec2_}, {"dec2.b", &b_dec2_},
            {"dec3.w", &w_dec3_}, {"dec3.b", &b_dec3_},
        };
    }

    /// Trainable parameters plus batchnorm running statistics (everything a
    /// checkpoint must carry).
    NamedParams named_state() {
        NamedParams all = named_params();
        all.push_back({"bn1.running_mean", &bn1_.running_mean});
        all.push_back({"bn1.running_var", &bn1_.running_var});
        all.push_back({"bn2.running_mean", &bn2_.running_mean});
        all.push_back({"bn2.running_var", &bn2_.running_var});
        all.push_back({"bn3.running_mean", &bn3_.running_mean});
        all.push_back({"bn3.running_var", &bn3_.running_var});
        return all;
    }

    /// Eval-mode reconstruction of a WxSxS window; read-only and safe to call
    /// concurrently.
    Tensor<T> reconstruct(const Tensor<T>& window) const {
        check_window(window);
        ensure_finite(window, "reconstruct input");
        Tensor<T> x0 = lift(window);
        Tensor<T> t = nn::conv2d_forward(x0, w_enc1_, b_enc1_, enc1_);
        t = nn::batchnorm_eval_forward(t, bn1_);
        t = nn::relu_forward(t);
        t = nn::maxpool2x2_forward(t).out;
        t = nn::conv2d_forward(t, w_enc2_, b_enc2_, enc2_);
        t = nn::batchnorm_eval_forward(t, bn2_);
        t = nn::relu_forward(t);
        t = nn::maxpool2x2_forward(t).out;
        t = nn::conv2d_forward(t, w_enc3_, b_enc3_, enc3_);
        t = nn::batchnorm_eval_forward(t, bn3_);
        t = nn::relu_forward(t);
        t = nn::deconv2d_forward(t, w_dec1_, b_dec1_, dec1_);
        t = nn::relu_forward(t);
        t = nn::deconv2d_forward(t, w_dec2_, b_dec2_, dec2_);
        t = nn::relu_forward(t);
        t = nn::deconv2d_forward(t, w_dec3_, b_dec3_, dec3_);
        t = nn::sigmoid_forward(t);
        return drop(t);
    }

    /// Bottleneck feature map for a window (eval mode); mainly for shape
    /// checks and diagnostics.
    Tensor<T> encode(const Tensor<T>& window) const {
        check_window(window);
        Tensor<T> t = lift(window);
        t = nn::conv2d_forward(t, w_enc1_, b_enc1_, enc1_);
        t = nn::batchnorm_eval_forward(t, bn1_);
        t = nn::relu_forward(t);
        t = nn::maxpool2x2_forward(t).out;
        t = nn::conv2d_forward(t, w_enc2_, b_enc2_, enc2_);
        t = nn::batchnorm_eval_forward(t, bn2_);
        t = nn::relu_forward(t);
        t = nn::maxpool2x2_forward(t).out;
        t = nn::conv2d_forward(t, w_enc3_, b_enc3_, enc3_);
        t = nn::batchnorm_eval_forward(t, bn3_);
        return nn::relu_forward(t);
    }

    /// Training-mode forward over a batch of stacked frames [F_total,S,S].
    /// Batch statistics are computed over all frames passed in together.
    Tensor<T> train_forward(const Tensor<T>& frames, Cache& cache) {
        check_window(frames);
        ensure_finite(frames, "train input");
        cache.x0 = lift(frames);
        Tensor<T> t = nn::conv2d_forward(cache.x0, w_enc1_, b_enc1_, enc1_);
        t = nn::batchnorm_train_forward(t, bn1_, cache.bn1);
        cache.r1 = nn::relu_forward(t);
        cache.r1_shape = cache.r1.shape;
        auto pool1 = nn::maxpool2x2_forward(cache.r1);
        cache.pool1 = std::move(pool1.argmax);
        cache.p1 = std::move(pool1.out);
        t = nn::conv2d_forward(cache.p1, w_enc2_, b_enc2_, enc2_);
        t = nn::batchnorm_train_forward(t, bn2_, cache.bn2);
        cache.r2 = nn::relu_forward(t);
        cache.r2_shape = cache.r2.shape;
        auto pool2 = nn::maxpool2x2_forward(cache.r2);
        cache.pool2 = std::move(pool2.argmax);
        cache.p2 = std::move(pool2.out);
        t = nn::conv2d_forward(cache.p2, w_enc3_, b_enc3_, enc3_);
        t = nn::batchnorm_train_forward(t, bn3_, cache.bn3);
        cache.r3 = nn::relu_forward(t);
        t = nn::deconv2d_forward(cache.r3, w_dec1_, b_dec1_, dec1_);
        cache.e1 = nn::relu_forward(t);
        t = nn::deconv2d_forward(cache.e1, w_dec2_, b_dec2_, dec2_);
        cache.e2 = nn::relu_forward(t);
        t = nn::deconv2d_forward(cache.e2, w_dec3_, b_dec3_, dec3_);
        cache.y = nn::sigmoid_forward(t);
        return drop(cache.y);
    }

    /// Backward pass for train_forward. grad_recon is dL/d(reconstruction),
    /// shaped like the input window stack. Returns gradients aligned with
    /// named_params() order.
    NamedGrads backward(const Tensor<T>& grad_recon, const Cache& cache) {
        Tensor<T> g = lift(grad_recon);
        g = nn::sigmoid_backward(g, cache.y);
        auto d3 = nn::deconv2d_backward(g, cache.e2, w_dec3_, dec3_);
        g = nn::relu_backward(d3.input, cache.e2);
        auto d2 = nn::deconv2d_backward(g, cache.e1, w_dec2_, dec2_);
        g = nn::relu_backward(d2.input, cache.e1);
        auto d1 = nn::deconv2d_backward(g, cache.r3, w_dec1_, dec1_);
        g = nn::relu_backward(d1.input, cache.r3);
        auto b3 = nn::batchnorm_backward(g, bn3_, cache.bn3);
        auto c3 = nn::conv2d_backward(b3.input, cache.p2, w_enc3_, enc3_);
        g = nn::maxpool2x2_backward(c3.input, cache.pool2, cache.r2_shape);
        g = nn::relu_backward(g, cache.r2);
        auto b2 = nn::batchnorm_backward(g, bn2_, cache.bn2);
        auto c2 = nn::conv2d_backward(b2.input, cache.p1, w_enc2_, enc2_);
        g = nn::maxpool2x2_backward(c2.input, cache.pool1, cache.r1_shape);
        g = nn::relu_backward(g, cache.r1);
        auto b1 = nn::batchnorm_backward(g, bn1_, cache.bn1);
        auto c1 = nn::conv2d_backward(b1.input, cache.x0, w_enc1_, enc1_);

        NamedGrads grads;
        grads.reserve(18);
        grads.emplace_back("enc1.w", std::move(c1.weights));
        grads.emplace_back("enc1.b", std::move(c1.bias));
        grads.emplace_back("bn1.gamma", std::move(b1.gamma));
        grads.emplace_back("bn1.beta", std::move(b1.beta));
        grads.emplace_back("enc2.w", std::move(c2.weights));
        grads.emplace_back("enc2.b", std::move(c2.bias));
        grads.emplace_back("bn2.gamma", std::move(b2.gamma));
        grads.emplace_back("bn2.beta", std::move(b2.beta));
        grads.emplace_back("enc3.w", std::move(c3.weights));
        grads.emplace_back("enc3.b", std::move(c3.bias));
        grads.emplace_back("bn3.gamma", std::move(b3.gamma));
        grads.emplace_back("bn3.beta", std::move(b3.beta));
        grads.emplace_back("dec1.w", std::move(d1.weights));
        grads.emplace_back("dec1.b", std::move(d1.bias));
        grads.emplace_back("dec2.w", std::move(d2.weights));
        grads.emplace_back("dec2.b", std::move(d2.bias));
        grads.emplace_back("dec3.w", std::move(d3.weights));
        grads.emplace_back("dec3.b", std::move(d3.bias));
        return grads;
    }

    template <typename U>
    DepCae<U> cast() const {
        DepCae<U> out(plan_, image_size_, seed_);
        auto us = out.named_state();
        auto ts = const_cast<DepCae*>(this)->named_state();
        for (std::size_t i = 0; i < ts.size(); ++i)
            *us[i].second = ts[i].second->template cast<U>();
        return out;
    }

private:
    void check_window(const Tensor<T>& w) const {
        if (w.rank() != 3)
            throw Error("model: expected WxSxS window, got " +
                        shape_string(w.shape));
        if (w.dim(1) != image_size_ || w.dim(2) != image_size_)
            throw Error("model: window spatial size " +
                        std::to_string(w.dim(1)) + "x" + std::to_string(w.dim(2)) +
                        " does not match model image size " +
                        std::to_string(image_size_));
    }

    static Tensor<T> lift(const Tensor<T>& w3) {
        Tensor<T> x({1, w3.dim(0), w3.dim(1), w3.dim(2)});
        x.data = w3.data;
        return x;
    }

    static Tensor<T> drop(const Tensor<T>& x4) {
        Tensor<T> w({x4.dim(1), x4.dim(2), x4.dim(3)});
        w.data = x4.data;
        return w;
    }

    static Tensor<T> init_conv(Rng& rng, int cout, int cin) {
        Tensor<T> w({static_cast<std::size_t>(cout), static_cast<std::size_t>(cin),
                     3, 3});
        const double std_dev = std::sqrt(2.0 / (cin * 9.0));
        for (T& v : w.data) v = static_cast<T>(rng.normal() * std_dev);
        return w;
    }

    static Tensor<T> init_deconv(Rng& rng, int cin, int cout) {
        Tensor<T> w({static_cast<std::size_t>(cin), static_cast<std::size_t>(cout),
                     3, 3});
        const double std_dev = std::sqrt(2.0 / (cin * 9.0));
        for (T& v : w.data) v = static_cast<T>(rng.normal() * std_dev);
        return w;
    }

    std::vector<int> plan_;
    std::size_t image_size_;
    std::uint64_t seed_;

    nn::LayerSpec enc1_, enc2_, enc3_, dec1_, dec2_, dec3_;
    Tensor<T> w_enc1_, w_enc2_, w_enc3_, b_enc1_, b_enc2_, b_enc3_;
    Tensor<T> w_dec1_, w_dec2_, w_dec3_, b_dec1_, b_dec2_, b_dec3_;
    nn::BatchNormParams<T> bn1_, bn2_, bn3_;

    template <typename U>
    friend class DepCae;
};

}  // namespace divad
