#pragma once

// The recurrent classifier: a per-frame 2D conv encoder over the 21 x 3
// landmark grid feeding one unidirectional LSTM, final-hidden-state
// readout. Backward is explicit backprop-through-time; the forward trace
// caches everything the gradient needs.

#include "slrbench/landmark.hpp"
#include "slrbench/model.hpp"
#include "slrbench/ops.hpp"

namespace slr {

template <typename S>
struct LstmCellOut {
    TensorT<S> h;
    TensorT<S> c;
};

// One LSTM step on a single vector. Gate order in the stacked weights is
// [input, forget, candidate, output]; candidate uses tanh, gates sigmoid.
template <typename S>
LstmCellOut<S> lstm_cell(const TensorT<S>& x, const TensorT<S>& h, const TensorT<S>& c,
                         const TensorT<S>& w_x, const TensorT<S>& w_h, const TensorT<S>& bias) {
    const size_t d_in = x.size();
    const size_t units = h.size();
    if (w_x.rank() != 2 || w_x.extent(0) != d_in || w_x.extent(1) != 4 * units ||
        w_h.rank() != 2 || w_h.extent(0) != units || w_h.extent(1) != 4 * units ||
        bias.size() != 4 * units || c.size() != units)
        throw DimensionError("lstm_cell: inconsistent shapes");

    std::vector<S> a(4 * units);
    for (size_t j = 0; j < 4 * units; ++j) a[j] = bias[j];
    for (size_t p = 0; p < d_in; ++p) {
        const S xp = x[p];
        const S* row = w_x.data() + p * 4 * units;
        for (size_t j = 0; j < 4 * units; ++j) a[j] += xp * row[j];
    }
    for (size_t p = 0; p < units; ++p) {
        const S hp = h[p];
        const S* row = w_h.data() + p * 4 * units;
        for (size_t j = 0; j < 4 * units; ++j) a[j] += hp * row[j];
    }

    LstmCellOut<S> out{TensorT<S>({units}), TensorT<S>({units})};
    for (size_t u = 0; u < units; ++u) {
        const S gi = S(1) / (S(1) + std::exp(-a[u]));
        const S gf = S(1) / (S(1) + std::exp(-a[units + u]));
        const S gg = std::tanh(a[2 * units + u]);
        const S go = S(1) / (S(1) + std::exp(-a[3 * units + u]));
        out.c[u] = gf * c[u] + gi * gg;
        out.h[u] = go * std::tanh(out.c[u]);
    }
    return out;
}

template <typename S>
struct ConvLstmTrace {
    TensorT<S> input;     // [B, T, 63]
    TensorT<S> conv_pre;  // [B, T, Df] pre-ReLU conv features
    TensorT<S> z;         // [B, T, Df] post-ReLU
    TensorT<S> gates;     // [B, T, 4H] post-nonlinearity, order i|f|g|o
    TensorT<S> c;         // [B, T+1, H] cell states, step 0 is zero
    TensorT<S> h;         // [B, T+1, H] hidden states
    TensorT<S> tanh_c;    // [B, T, H]
    TensorT<S> drop_mask; // [B, H] multiplicative mask (ones at inference)
    TensorT<S> h_dropped; // [B, H]
};

template <typename S>
TensorT<S> convlstm_forward(const ModelConfig& cfg, const ParamSet<S>& params,
                            const TensorT<S>& batch, bool training, Rng& rng,
                            ConvLstmTrace<S>* trace = nullptr) {
    if (batch.rank() != 3 || batch.extent(2) != kFeatDim)
        throw DimensionError("convlstm_forward: expected [B x T x 63], got " +
                             batch.shape_str());
    const size_t b = batch.extent(0), t = batch.extent(1);
    const auto units = static_cast<size_t>(cfg.lstm_units);
    const auto df = static_cast<size_t>(cfg.conv_feature_dim());

    const TensorT<S>& kernels = params["conv.kernels"];
    const TensorT<S>& conv_bias = params["conv.bias"];
    const TensorT<S>& w_x = params["lstm.w_x"];
    const TensorT<S>& w_h = params["lstm.w_h"];
    const TensorT<S>& lstm_bias = params["lstm.bias"];

    ConvLstmTrace<S> local;
    ConvLstmTrace<S>& tr = trace ? *trace : local;
    const bool keep = trace != nullptr;
    if (keep) {
        tr.input = batch;
        tr.conv_pre = TensorT<S>({b, t, df});
        tr.gates = TensorT<S>({b, t, 4 * units});
        tr.c = TensorT<S>({b, t + 1, units});
        tr.h = TensorT<S>({b, t + 1, units});
        tr.tanh_c = TensorT<S>({b, t, units});
    }

    // Per-frame conv encoder: reshape the 63 features to a 21 x 3 x 1 grid
    // (landmark-major rows), conv with 3x3 kernels, ReLU, flatten.
    TensorT<S> z({b, t, df});
    TensorT<S> grid({kLandmarks, 3, 1});
    for (size_t bi = 0; bi < b; ++bi) {
        for (size_t ti = 0; ti < t; ++ti) {
            const S* frame = batch.data() + (bi * t + ti) * kFeatDim;
            for (size_t i = 0; i < kFeatDim; ++i) grid[i] = frame[i];
            const TensorT<S> pre = conv2d_same(grid, kernels, conv_bias);
            S* zrow = z.data() + (bi * t + ti) * df;
            for (size_t i = 0; i < df; ++i) zrow[i] = pre[i] > S(0) ? pre[i] : S(0);
            if (keep) {
                S* prow = tr.conv_pre.data() + (bi * t + ti) * df;
                for (size_t i = 0; i < df; ++i) prow[i] = pre[i];
            }
        }
    }

    // LSTM over time, batched per step.
    TensorT<S> h_state({b, units});
    TensorT<S> c_state({b, units});
    TensorT<S> z_step({b, df});
    for (size_t ti = 0; ti < t; ++ti) {
        for (size_t bi = 0; bi < b; ++bi)
            std::copy_n(z.data() + (bi * t + ti) * df, df, z_step.data() + bi * df);

        TensorT<S> a = matmul(z_step, w_x);
        const TensorT<S> rec = matmul(h_state, w_h);
        for (size_t i = 0; i < a.size(); ++i) a[i] += rec[i] + lstm_bias[i % (4 * units)];

        for (size_t bi = 0; bi < b; ++bi) {
            const S* arow = a.data() + bi * 4 * units;
            S* hrow = h_state.data() + bi * units;
            S* crow = c_state.data() + bi * units;
            for (size_t u = 0; u < units; ++u) {
                const S gi = S(1) / (S(1) + std::exp(-arow[u]));
                const S gf = S(1) / (S(1) + std::exp(-arow[units + u]));
                const S gg = std::tanh(arow[2 * units + u]);
                const S go = S(1) / (S(1) + std::exp(-arow[3 * units + u]));
                const S c_new = gf * crow[u] + gi * gg;
                const S tc = std::tanh(c_new);
                crow[u] = c_new;
                hrow[u] = go * tc;
                if (keep) {
                    S* grow = tr.gates.data() + (bi * t + ti) * 4 * units;
                    grow[u] = gi;
                    grow[units + u] = gf;
                    grow[2 * units + u] = gg;
                    grow[3 * units + u] = go;
                    tr.tanh_c.at(bi, ti, u) = tc;
                    tr.c.at(bi, ti + 1, u) = c_new;
                    tr.h.at(bi, ti + 1, u) = hrow[u];
                }
            }
        }
    }

    // Dropout on the final hidden state, then the class head.
    TensorT<S> mask = TensorT<S>::full({b, units}, S(1));
    if (training && cfg.dropout > 0.0) {
        const S scale = static_cast<S>(1.0 / (1.0 - cfg.dropout));
        for (size_t i = 0; i < mask.size(); ++i)
            mask[i] = rng.uniform() < cfg.dropout ? S(0) : scale;
    }
    TensorT<S> h_dropped({b, units});
    for (size_t i = 0; i < h_dropped.size(); ++i) h_dropped[i] = h_state[i] * mask[i];

    TensorT<S> logits = matmul(h_dropped, params["head.weight"]);
    const TensorT<S>& head_bias = params["head.bias"];
    for (size_t bi = 0; bi < b; ++bi)
        for (size_t k = 0; k < head_bias.size(); ++k) logits.at(bi, k) += head_bias[k];

    if (keep) {
        tr.z = std::move(z);
        tr.drop_mask = std::move(mask);
        tr.h_dropped = std::move(h_dropped);
    }
    detail::check_op_output(logits, "convlstm_forward");
    return logits;
}

template <typename S>
ParamSet<S> convlstm_backward(const ModelConfig& cfg, const ParamSet<S>& params,
                              const ConvLstmTrace<S>& tr, const TensorT<S>& dlogits) {
    const size_t b = tr.input.extent(0), t = tr.input.extent(1);
    const auto units = static_cast<size_t>(cfg.lstm_units);
    const auto df = static_cast<size_t>(cfg.conv_feature_dim());
    const auto f = static_cast<size_t>(cfg.conv_filters);

    ParamSet<S> grads = ParamSet<S>::zeros_like(params);

    // Head.
    grads["head.weight"] = matmul_tn(tr.h_dropped, dlogits);
    {
        TensorT<S>& db = grads["head.bias"];
        for (size_t bi = 0; bi < b; ++bi)
            for (size_t k = 0; k < db.size(); ++k) db[k] += dlogits.at(bi, k);
    }
    TensorT<S> dh = matmul_nt(dlogits, params["head.weight"]); // [B, H]
    for (size_t i = 0; i < dh.size(); ++i) dh[i] *= tr.drop_mask[i];

    // Backprop through time.
    const TensorT<S>& w_x = params["lstm.w_x"];
    const TensorT<S>& w_h = params["lstm.w_h"];
    TensorT<S>& dw_x = grads["lstm.w_x"];
    TensorT<S>& dw_h = grads["lstm.w_h"];
    TensorT<S>& dlstm_bias = grads["lstm.bias"];

    TensorT<S> dc({b, units});
    TensorT<S> dz({b, t, df});
    TensorT<S> da({b, 4 * units});
    TensorT<S> z_step({b, df});
    TensorT<S> h_prev({b, units});
    for (size_t ti = t; ti-- > 0;) {
        for (size_t bi = 0; bi < b; ++bi) {
            const S* grow = tr.gates.data() + (bi * t + ti) * 4 * units;
            S* darow = da.data() + bi * 4 * units;
            for (size_t u = 0; u < units; ++u) {
                const S gi = grow[u];
                const S gf = grow[units + u];
                const S gg = grow[2 * units + u];
                const S go = grow[3 * units + u];
                const S tc = tr.tanh_c.at(bi, ti, u);
                const S dh_u = dh.at(bi, u);
                const S dc_u = dc.at(bi, u) + dh_u * go * (S(1) - tc * tc);
                const S c_prev = tr.c.at(bi, ti, u);
                darow[u] = dc_u * gg * gi * (S(1) - gi);
                darow[units + u] = dc_u * c_prev * gf * (S(1) - gf);
                darow[2 * units + u] = dc_u * gi * (S(1) - gg * gg);
                darow[3 * units + u] = dh_u * tc * go * (S(1) - go);
                dc.at(bi, u) = dc_u * gf;
            }
        }

        for (size_t bi = 0; bi < b; ++bi) {
            std::copy_n(tr.z.data() + (bi * t + ti) * df, df, z_step.data() + bi * df);
            std::copy_n(tr.h.data() + (bi * (t + 1) + ti) * units, units,
                        h_prev.data() + bi * units);
        }

        const TensorT<S> dwx_t = matmul_tn(z_step, da);
        for (size_t i = 0; i < dw_x.size(); ++i) dw_x[i] += dwx_t[i];
        const TensorT<S> dwh_t = matmul_tn(h_prev, da);
        for (size_t i = 0; i < dw_h.size(); ++i) dw_h[i] += dwh_t[i];
        for (size_t bi = 0; bi < b; ++bi)
            for (size_t j = 0; j < 4 * units; ++j) dlstm_bias[j] += da.at(bi, j);

        const TensorT<S> dz_t = matmul_nt(da, w_x); // [B, Df]
        for (size_t bi = 0; bi < b; ++bi)
            std::copy_n(dz_t.data() + bi * df, df, dz.data() + (bi * t + ti) * df);
        dh = matmul_nt(da, w_h); // gradient into h_{t-1}
    }

    // ReLU, then conv kernels/bias. The input carries no gradient.
    TensorT<S>& dkern = grads["conv.kernels"];
    TensorT<S>& dconv_bias = grads["conv.bias"];
    for (size_t bi = 0; bi < b; ++bi) {
        for (size_t ti = 0; ti < t; ++ti) {
            const S* pre = tr.conv_pre.data() + (bi * t + ti) * df;
            const S* dzrow = dz.data() + (bi * t + ti) * df;
            const S* frame = tr.input.data() + (bi * t + ti) * kFeatDim;
            for (size_t y = 0; y < kLandmarks; ++y) {
                for (size_t x = 0; x < 3; ++x) {
                    const S* dcell = dzrow + (y * 3 + x) * f;
                    const S* pcell = pre + (y * 3 + x) * f;
                    for (size_t fo = 0; fo < f; ++fo) {
                        if (pcell[fo] <= S(0)) continue;
                        const S g = dcell[fo];
                        dconv_bias[fo] += g;
                        for (size_t ky = 0; ky < 3; ++ky) {
                            const ptrdiff_t iy = static_cast<ptrdiff_t>(y + ky) - 1;
                            if (iy < 0 || iy >= static_cast<ptrdiff_t>(kLandmarks)) continue;
                            for (size_t kx = 0; kx < 3; ++kx) {
                                const ptrdiff_t ix = static_cast<ptrdiff_t>(x + kx) - 1;
                                if (ix < 0 || ix >= 3) continue;
                                dkern.at(ky, kx, 0, fo) +=
                                    frame[static_cast<size_t>(iy) * 3 +
                                          static_cast<size_t>(ix)] *
                                    g;
                            }
                        }
                    }
                }
            }
        }
    }

    return grads;
}

} // namespace slr
