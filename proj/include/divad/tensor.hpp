#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace divad {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dense row-major tensor. T is float for training/scoring, double for
/// gradient verification.
template <typename T>
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<T> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
        data.assign(element_count(shape), T(0));
    }

    Tensor(std::vector<std::size_t> s, std::vector<T> d)
        : shape(std::move(s)), data(std::move(d)) {
        if (data.size() != element_count(shape)) {
            throw Error("tensor: data length " + std::to_string(data.size()) +
                        " does not match shape product " +
                        std::to_string(element_count(shape)));
        }
    }

    static std::size_t element_count(const std::vector<std::size_t>& s) {
        std::size_t n = 1;
        for (std::size_t d : s) n *= d;
        return n;
    }

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }

    std::size_t dim(std::size_t i) const {
        if (i >= shape.size()) throw Error("tensor: axis out of range");
        return shape[i];
    }

    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }

    // 4D accessors for [C, F, H, W] layouts used by the layers.
    T& at4(std::size_t c, std::size_t f, std::size_t y, std::size_t x) {
        return data[((c * shape[1] + f) * shape[2] + y) * shape[3] + x];
    }
    T at4(std::size_t c, std::size_t f, std::size_t y, std::size_t x) const {
        return data[((c * shape[1] + f) * shape[2] + y) * shape[3] + x];
    }

    T& at3(std::size_t a, std::size_t b, std::size_t c) {
        return data[(a * shape[1] + b) * shape[2] + c];
    }
    T at3(std::size_t a, std::size_t b, std::size_t c) const {
        return data[(a * shape[1] + b) * shape[2] + c];
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    template <typename U>
    Tensor<U> cast() const {
        Tensor<U> out(shape);
        for (std::size_t i = 0; i < data.size(); ++i)
            out.data[i] = static_cast<U>(data[i]);
        return out;
    }
};

inline std::string shape_string(const std::vector<std::size_t>& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

template <typename T>
void ensure_finite(const Tensor<T>& t, const std::string& what) {
    if (!t.all_finite()) throw Error(what + ": non-finite values present");
}

template <typename T>
void ensure_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                       const std::string& what) {
    if (!a.same_shape(b)) {
        for (std::size_t i = 0; i < std::max(a.rank(), b.rank()); ++i) {
            std::size_t da = i < a.rank() ? a.shape[i] : 0;
            std::size_t db = i < b.rank() ? b.shape[i] : 0;
            if (da != db) {
                throw Error(what + ": shape mismatch on axis " +
                            std::to_string(i) + " (" + shape_string(a.shape) +
                            " vs " + shape_string(b.shape) + ")");
            }
        }
        throw Error(what + ": shape mismatch (" + shape_string(a.shape) +
                    " vs " + shape_string(b.shape) + ")");
    }
}

/// Deterministic RNG. Uniform/normal draws are derived from raw mt19937_64
/// bits rather than std distributions so streams do not depend on the
/// standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        // Rejection sampling to avoid modulo bias.
        if (n == 0) throw Error("rng: uniform_int(0)");
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Independent substream keyed on (seed, key); used for per-frame and
    /// per-clip determinism.
    static Rng substream(std::uint64_t seed, std::uint64_t key) {
        // splitmix64 over the pair gives well-separated seeds.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return Rng(z);
    }

    template <typename It>
    void shuffle(It first, It last) {
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            std::uint64_t j = uniform_int(i);
            std::swap(first[i - 1], first[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace divad
