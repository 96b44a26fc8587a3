#pragma once

// Core dense ops shared by both model families.
//
// Reductions run in a fixed left-to-right order (ascending inner index) so
// results are reproducible run to run; nothing here reassociates sums.

#include <algorithm>
#include <cmath>

#include "slrbench/rng.hpp"
#include "slrbench/tensor.hpp"

namespace slr {

namespace detail {
template <typename S>
inline void check_op_output(const TensorT<S>& t, const char* op) {
    if (checked_mode()) t.ensure_finite(op);
}
} // namespace detail

// C[m x n] = A[m x k] * B[k x n]; accumulation over k is ascending.
template <typename S>
TensorT<S> matmul(const TensorT<S>& a, const TensorT<S>& b) {
    if (a.rank() != 2 || b.rank() != 2)
        throw DimensionError("matmul: expected rank-2 tensors, got " + a.shape_str() + " and " +
                             b.shape_str());
    if (a.extent(1) != b.extent(0))
        throw DimensionError("matmul: inner extents differ, " + a.shape_str() + " vs " +
                             b.shape_str());
    const size_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
    TensorT<S> c({m, n});
    const S* pa = a.data();
    const S* pb = b.data();
    S* pc = c.data();
    for (size_t i = 0; i < m; ++i) {
        S* crow = pc + i * n;
        for (size_t p = 0; p < k; ++p) {
            const S aip = pa[i * k + p];
            const S* brow = pb + p * n;
            for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
    detail::check_op_output(c, "matmul");
    return c;
}

// Same-size cross-correlation with 3x3 kernels and zero padding of 1.
// input [H x W x Cin], kernels [3 x 3 x Cin x Cout], bias [Cout].
template <typename S>
TensorT<S> conv2d_same(const TensorT<S>& input, const TensorT<S>& kernels,
                       const TensorT<S>& bias) {
    if (input.rank() != 3) throw DimensionError("conv2d_same: input must be HxWxC");
    if (kernels.rank() != 4 || kernels.extent(0) != 3 || kernels.extent(1) != 3)
        throw DimensionError("conv2d_same: kernels must be 3x3xCinxCout");
    const size_t h = input.extent(0), w = input.extent(1), cin = input.extent(2);
    const size_t cout = kernels.extent(3);
    if (kernels.extent(2) != cin)
        throw DimensionError("conv2d_same: kernel channels " +
                             std::to_string(kernels.extent(2)) + " != input channels " +
                             std::to_string(cin));
    if (bias.rank() != 1 || bias.extent(0) != cout)
        throw DimensionError("conv2d_same: bias must have one entry per output channel");

    TensorT<S> out({h, w, cout});
    for (size_t y = 0; y < h; ++y) {
        for (size_t x = 0; x < w; ++x) {
            for (size_t co = 0; co < cout; ++co) {
                S acc = bias[co];
                for (size_t ky = 0; ky < 3; ++ky) {
                    const ptrdiff_t iy = static_cast<ptrdiff_t>(y + ky) - 1;
                    if (iy < 0 || iy >= static_cast<ptrdiff_t>(h)) continue;
                    for (size_t kx = 0; kx < 3; ++kx) {
                        const ptrdiff_t ix = static_cast<ptrdiff_t>(x + kx) - 1;
                        if (ix < 0 || ix >= static_cast<ptrdiff_t>(w)) continue;
                        for (size_t ci = 0; ci < cin; ++ci)
                            acc += input.at(static_cast<size_t>(iy), static_cast<size_t>(ix), ci) *
                                   kernels.at(ky, kx, ci, co);
                    }
                }
                out.at(y, x, co) = acc;
            }
        }
    }
    detail::check_op_output(out, "conv2d_same");
    return out;
}

// Numerically stable softmax of a vector; argmax is preserved.
template <typename S>
TensorT<S> softmax(const TensorT<S>& logits) {
    if (logits.rank() != 1 || logits.size() == 0)
        throw DimensionError("softmax: expected a non-empty vector");
    TensorT<S> out(logits.shape());
    S hi = logits[0];
    for (size_t i = 1; i < logits.size(); ++i) hi = std::max(hi, logits[i]);
    S sum = 0;
    for (size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - hi);
        sum += out[i];
    }
    for (size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
    detail::check_op_output(out, "softmax");
    return out;
}

// In-place row softmax for [rows x cols] matrices.
template <typename S>
void softmax_rows_inplace(TensorT<S>& m) {
    if (m.rank() != 2) throw DimensionError("softmax_rows: expected a matrix");
    const size_t rows = m.extent(0), cols = m.extent(1);
    for (size_t r = 0; r < rows; ++r) {
        S* row = m.data() + r * cols;
        S hi = row[0];
        for (size_t c = 1; c < cols; ++c) hi = std::max(hi, row[c]);
        S sum = 0;
        for (size_t c = 0; c < cols; ++c) {
            row[c] = std::exp(row[c] - hi);
            sum += row[c];
        }
        for (size_t c = 0; c < cols; ++c) row[c] /= sum;
    }
    detail::check_op_output(m, "softmax_rows");
}

// (x - mean) / sqrt(var + epsilon), then scaled by gain and shifted.
template <typename S>
TensorT<S> layer_norm(const TensorT<S>& x, const TensorT<S>& gain, const TensorT<S>& shift,
                      S epsilon) {
    if (x.rank() != 1 || !x.same_shape(gain) || !x.same_shape(shift))
        throw DimensionError("layer_norm: x, gain, shift must be equal-length vectors");
    if (!(epsilon > S(0))) throw ParameterError("layer_norm: epsilon must be positive");
    const size_t d = x.size();
    S mean = 0;
    for (size_t i = 0; i < d; ++i) mean += x[i];
    mean /= static_cast<S>(d);
    S var = 0;
    for (size_t i = 0; i < d; ++i) var += (x[i] - mean) * (x[i] - mean);
    var /= static_cast<S>(d);
    const S inv = S(1) / std::sqrt(var + epsilon);
    TensorT<S> out(x.shape());
    for (size_t i = 0; i < d; ++i) out[i] = (x[i] - mean) * inv * gain[i] + shift[i];
    detail::check_op_output(out, "layer_norm");
    return out;
}

// Inverted dropout: training zeroes with probability p and scales survivors
// by 1/(1-p); inference is an exact identity.
template <typename S>
TensorT<S> dropout(const TensorT<S>& x, double p, Rng& rng, bool training) {
    if (p < 0.0 || p >= 1.0) throw ParameterError("dropout: p must be in [0, 1)");
    if (!training || p == 0.0) return x;
    TensorT<S> out(x.shape());
    const S scale = static_cast<S>(1.0 / (1.0 - p));
    for (size_t i = 0; i < x.size(); ++i)
        out[i] = rng.uniform() < p ? S(0) : x[i] * scale;
    detail::check_op_output(out, "dropout");
    return out;
}

template <typename S>
TensorT<S> relu(const TensorT<S>& x) {
    TensorT<S> out(x.shape());
    for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] > S(0) ? x[i] : S(0);
    return out;
}

// C[k x n] = A^T[k x m] * B[m x n] without materializing the transpose.
template <typename S>
TensorT<S> matmul_tn(const TensorT<S>& a, const TensorT<S>& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.extent(0) != b.extent(0))
        throw DimensionError("matmul_tn: incompatible shapes " + a.shape_str() + " and " +
                             b.shape_str());
    const size_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
    TensorT<S> c({k, n});
    for (size_t p = 0; p < m; ++p) {
        const S* arow = a.data() + p * k;
        const S* brow = b.data() + p * n;
        for (size_t i = 0; i < k; ++i) {
            S* crow = c.data() + i * n;
            const S aip = arow[i];
            for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
    detail::check_op_output(c, "matmul_tn");
    return c;
}

// C[m x n] = A[m x k] * B^T[k x n] (B given as [n x k]).
template <typename S>
TensorT<S> matmul_nt(const TensorT<S>& a, const TensorT<S>& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.extent(1) != b.extent(1))
        throw DimensionError("matmul_nt: incompatible shapes " + a.shape_str() + " and " +
                             b.shape_str());
    const size_t m = a.extent(0), k = a.extent(1), n = b.extent(0);
    TensorT<S> c({m, n});
    for (size_t i = 0; i < m; ++i) {
        const S* arow = a.data() + i * k;
        for (size_t j = 0; j < n; ++j) {
            const S* brow = b.data() + j * k;
            S acc = 0;
            for (size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
            c.at(i, j) = acc;
        }
    }
    detail::check_op_output(c, "matmul_nt");
    return c;
}

} // namespace slr
