#pragma once

// Dense row-major tensor over float or double.
//
// Values are immutable by convention once an operation returns: ops take
// tensors by const reference and build fresh outputs. In checked mode the
// constructor and every op in ops.hpp reject non-finite values.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "slrbench/common.hpp"

namespace slr {

template <typename S>
class TensorT {
    static_assert(std::is_floating_point_v<S>);

  public:
    using value_type = S;

    TensorT() = default;

    explicit TensorT(std::vector<size_t> shape)
        : shape_(std::move(shape)), v_(checked_count(shape_), S(0)) {}

    TensorT(std::vector<size_t> shape, std::vector<S> values)
        : shape_(std::move(shape)), v_(std::move(values)) {
        if (checked_count(shape_) != v_.size())
            throw DimensionError("tensor: shape " + shape_str() + " does not match " +
                                 std::to_string(v_.size()) + " values");
        if (checked_mode()) ensure_finite("tensor construction");
    }

    static TensorT zeros(std::vector<size_t> shape) { return TensorT(std::move(shape)); }

    static TensorT full(std::vector<size_t> shape, S value) {
        TensorT t(std::move(shape));
        for (auto& x : t.v_) x = value;
        return t;
    }

    static TensorT identity(size_t n) {
        TensorT t({n, n});
        for (size_t i = 0; i < n; ++i) t.v_[i * n + i] = S(1);
        return t;
    }

    const std::vector<size_t>& shape() const { return shape_; }
    size_t rank() const { return shape_.size(); }
    size_t extent(size_t dim) const { return shape_.at(dim); }
    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    S* data() { return v_.data(); }
    const S* data() const { return v_.data(); }
    std::vector<S>& values() { return v_; }
    const std::vector<S>& values() const { return v_; }

    S& operator[](size_t i) { return v_[i]; }
    const S& operator[](size_t i) const { return v_[i]; }

    S& at(size_t i, size_t j) { return v_[i * shape_[1] + j]; }
    const S& at(size_t i, size_t j) const { return v_[i * shape_[1] + j]; }

    S& at(size_t i, size_t j, size_t k) { return v_[(i * shape_[1] + j) * shape_[2] + k]; }
    const S& at(size_t i, size_t j, size_t k) const {
        return v_[(i * shape_[1] + j) * shape_[2] + k];
    }

    S& at(size_t i, size_t j, size_t k, size_t l) {
        return v_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }
    const S& at(size_t i, size_t j, size_t k, size_t l) const {
        return v_[((i * shape_[1] + j) * shape_[2] + k) * shape_[3] + l];
    }

    bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }

    std::string shape_str() const {
        std::string s = "[";
        for (size_t i = 0; i < shape_.size(); ++i) {
            if (i) s += "x";
            s += std::to_string(shape_[i]);
        }
        return s + "]";
    }

    template <typename T>
    TensorT<T> cast() const {
        std::vector<T> out(v_.size());
        for (size_t i = 0; i < v_.size(); ++i) out[i] = static_cast<T>(v_[i]);
        return TensorT<T>(shape_, std::move(out));
    }

    void ensure_finite(const std::string& where) const {
        for (const S x : v_)
            if (!std::isfinite(x)) throw DataError("non-finite value after " + where);
    }

  private:
    static size_t checked_count(const std::vector<size_t>& shape) {
        size_t n = 1;
        for (size_t e : shape) {
            if (e == 0) throw DimensionError("tensor: zero extent is not allowed");
            n *= e;
        }
        return n;
    }

    std::vector<size_t> shape_;
    std::vector<S> v_;
};

using TensorF = TensorT<float>;
using TensorD = TensorT<double>;

} // namespace slr
