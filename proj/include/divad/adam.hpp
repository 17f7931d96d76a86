#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>

#include "divad/tensor.hpp"

namespace divad {

template <typename T>
struct AdamConfig {
    T lr = T(1e-3);
    T beta1 = T(0.9);
    T beta2 = T(0.999);
    T eps = T(1e-8);
};

/// Standard Adam with bias correction. State is keyed by parameter name so
/// the same optimizer can drive any set of named tensors.
template <typename T>
class Adam {
public:
    explicit Adam(AdamConfig<T> cfg = {}) : cfg_(cfg) {}

    void step(const std::string& name, Tensor<T>& param, const Tensor<T>& grad) {
        ensure_same_shape(param, grad, "adam(" + name + ")");
        if (!grad.all_finite())
            throw Error("adam: non-finite gradient for parameter '" + name + "'");
        State& s = state_[name];
        if (s.m.size() != param.size()) {
            s.m = Tensor<T>(param.shape);
            s.v = Tensor<T>(param.shape);
            s.t = 0;
        }
        ++s.t;
        const T b1t = std::pow(cfg_.beta1, static_cast<T>(s.t));
        const T b2t = std::pow(cfg_.beta2, static_cast<T>(s.t));
        for (std::size_t i = 0; i < param.size(); ++i) {
            const T g = grad.data[i];
            s.m.data[i] = cfg_.beta1 * s.m.data[i] + (T(1) - cfg_.beta1) * g;
            s.v.data[i] = cfg_.beta2 * s.v.data[i] + (T(1) - cfg_.beta2) * g * g;
            const T m_hat = s.m.data[i] / (T(1) - b1t);
            const T v_hat = s.v.data[i] / (T(1) - b2t);
            param.data[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
        }
    }

    const AdamConfig<T>& config() const { return cfg_; }

private:
    struct State {
        Tensor<T> m, v;
        std::size_t t = 0;
    };
    AdamConfig<T> cfg_;
    std::unordered_map<std::string, State> state_;
};

}  // namespace divad
