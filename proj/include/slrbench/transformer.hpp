#pragma once

// The attention classifier: input projection 63 -> model_dim, sinusoidal
// positional encoding, post-norm encoder layers (self-attention + FFN,
// each with residual, layer norm, and dropout), mean pooling over frames,
// affine class head. Backward is written out layer by layer against the
// cached forward trace.

#include "slrbench/landmark.hpp"
#include "slrbench/model.hpp"
#include "slrbench/ops.hpp"

namespace slr {

inline constexpr double kLayerNormEps = 1e-5;

// PE[pos, 2i] = sin(pos / 10000^(2i/d)), PE[pos, 2i+1] = cos(same).
template <typename S = float>
TensorT<S> positional_encoding(size_t frames, size_t dim) {
    if (dim % 2 != 0) throw ParameterError("positional_encoding: dim must be even");
    if (frames == 0 || dim == 0)
        throw ParameterError("positional_encoding: extents must be positive");
    TensorT<S> pe({frames, dim});
    for (size_t pos = 0; pos < frames; ++pos) {
        for (size_t i = 0; i < dim / 2; ++i) {
            const double rate =
                std::pow(10000.0, 2.0 * static_cast<double>(i) / static_cast<double>(dim));
            const double angle = static_cast<double>(pos) / rate;
            pe.at(pos, 2 * i) = static_cast<S>(std::sin(angle));
            pe.at(pos, 2 * i + 1) = static_cast<S>(std::cos(angle));
        }
    }
    return pe;
}

template <typename S>
struct AttentionParams {
    const TensorT<S>& wq;
    const TensorT<S>& bq;
    const TensorT<S>& wk;
    const TensorT<S>& bk;
    const TensorT<S>& wv;
    const TensorT<S>& bv;
    const TensorT<S>& wo;
    const TensorT<S>& bo;
};

namespace detail {

template <typename S>
void add_bias_rows(TensorT<S>& m, const TensorT<S>& bias) {
    const size_t rows = m.extent(0), cols = m.extent(1);
    for (size_t r = 0; r < rows; ++r) {
        S* row = m.data() + r * cols;
        for (size_t c = 0; c < cols; ++c) row[c] += bias[c];
    }
}

// Scaled dot-product attention over already-projected q/k/v rows, one
// sample at a time. `probs_out`, when given, receives the heads * T * T
// attention weights.
template <typename S>
void attention_core(const S* q, const S* k, const S* v, size_t frames, size_t dim,
                    size_t heads, S* concat_out, S* probs_out) {
    const size_t head_dim = dim / heads;
    const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(head_dim)));
    std::vector<S> scores(frames * frames);
    for (size_t h = 0; h < heads; ++h) {
        const size_t off = h * head_dim;
        for (size_t i = 0; i < frames; ++i) {
            for (size_t j = 0; j < frames; ++j) {
                S acc = 0;
                const S* qi = q + i * dim + off;
                const S* kj = k + j * dim + off;
                for (size_t d = 0; d < head_dim; ++d) acc += qi[d] * kj[d];
                scores[i * frames + j] = acc * scale;
            }
        }
        // Row softmax.
        for (size_t i = 0; i < frames; ++i) {
            S* row = scores.data() + i * frames;
            S hi = row[0];
            for (size_t j = 1; j < frames; ++j) hi = std::max(hi, row[j]);
            S sum = 0;
            for (size_t j = 0; j < frames; ++j) {
                row[j] = std::exp(row[j] - hi);
                sum += row[j];
            }
            for (size_t j = 0; j < frames; ++j) row[j] /= sum;
        }
        if (probs_out) std::copy(scores.begin(), scores.end(), probs_out + h * frames * frames);
        for (size_t i = 0; i < frames; ++i) {
            S* out = concat_out + i * dim + off;
            std::fill(out, out + head_dim, S(0));
            for (size_t j = 0; j < frames; ++j) {
                const S p = scores[i * frames + j];
                const S* vj = v + j * dim + off;
                for (size_t d = 0; d < head_dim; ++d) out[d] += p * vj[d];
            }
        }
    }
}

} // namespace detail

// Standalone multi-head attention: projects q/k/v, runs scaled dot-product
// attention per head, concatenates, and output-projects.
template <typename S>
TensorT<S> multi_head_attention(const TensorT<S>& q_in, const TensorT<S>& k_in,
                                const TensorT<S>& v_in, const AttentionParams<S>& p,
                                size_t heads) {
    if (q_in.rank() != 2 || !q_in.same_shape(k_in) || !q_in.same_shape(v_in))
        throw DimensionError("multi_head_attention: q/k/v must share shape [T x d]");
    const size_t frames = q_in.extent(0), dim = q_in.extent(1);
    if (dim % heads != 0)
        throw DimensionError("multi_head_attention: dim not divisible by head count");

    TensorT<S> q = matmul(q_in, p.wq);
    detail::add_bias_rows(q, p.bq);
    TensorT<S> k = matmul(k_in, p.wk);
    detail::add_bias_rows(k, p.bk);
    TensorT<S> v = matmul(v_in, p.wv);
    detail::add_bias_rows(v, p.bv);

    TensorT<S> concat({frames, dim});
    detail::attention_core(q.data(), k.data(), v.data(), frames, dim, heads, concat.data(),
                           static_cast<S*>(nullptr));
    TensorT<S> out = matmul(concat, p.wo);
    detail::add_bias_rows(out, p.bo);
    return out;
}

template <typename S>
struct TransformerLayerTrace {
    TensorT<S> x;       // [BT, D] layer input
    TensorT<S> q, k, v; // [BT, D]
    TensorT<S> probs;   // [B, heads, T, T]
    TensorT<S> concat;  // [BT, D] pre output-projection
    TensorT<S> mask1;   // [BT, D] dropout mask on the attention branch
    TensorT<S> xhat1;   // [BT, D]
    std::vector<S> inv_std1;
    TensorT<S> n1; // [BT, D] post first layer norm
    TensorT<S> ffn_pre; // [BT, Dff]
    TensorT<S> mask2;   // [BT, D]
    TensorT<S> xhat2;   // [BT, D]
    std::vector<S> inv_std2;
};

template <typename S>
struct TransformerTrace {
    size_t batch = 0, frames = 0;
    TensorT<S> input2d; // [BT, 63]
    std::vector<TransformerLayerTrace<S>> layers;
    TensorT<S> pooled; // [B, D]
};

namespace detail {

// Post-norm layer norm over each row; caches xhat and 1/std for backward.
template <typename S>
TensorT<S> layer_norm_rows(const TensorT<S>& x, const TensorT<S>& gain, const TensorT<S>& shift,
                           TensorT<S>* xhat_out, std::vector<S>* inv_std_out) {
    const size_t rows = x.extent(0), d = x.extent(1);
    TensorT<S> out(x.shape());
    if (xhat_out) *xhat_out = TensorT<S>(x.shape());
    if (inv_std_out) inv_std_out->assign(rows, S(0));
    for (size_t r = 0; r < rows; ++r) {
        const S* row = x.data() + r * d;
        S mean = 0;
        for (size_t i = 0; i < d; ++i) mean += row[i];
        mean /= static_cast<S>(d);
        S var = 0;
        for (size_t i = 0; i < d; ++i) var += (row[i] - mean) * (row[i] - mean);
        var /= static_cast<S>(d);
        const S inv = S(1) / std::sqrt(var + static_cast<S>(kLayerNormEps));
        S* orow = out.data() + r * d;
        for (size_t i = 0; i < d; ++i) {
            const S xh = (row[i] - mean) * inv;
            if (xhat_out) xhat_out->at(r, i) = xh;
            orow[i] = xh * gain[i] + shift[i];
        }
        if (inv_std_out) (*inv_std_out)[r] = inv;
    }
    return out;
}

// dOut -> dIn for layer_norm_rows; accumulates dGain/dShift.
template <typename S>
TensorT<S> layer_norm_rows_backward(const TensorT<S>& dout, const TensorT<S>& xhat,
                                    const std::vector<S>& inv_std, const TensorT<S>& gain,
                                    TensorT<S>& dgain, TensorT<S>& dshift) {
    const size_t rows = dout.extent(0), d = dout.extent(1);
    TensorT<S> dx(dout.shape());
    for (size_t r = 0; r < rows; ++r) {
        const S* drow = dout.data() + r * d;
        const S* xrow = xhat.data() + r * d;
        S mean_a = 0, mean_ax = 0;
        for (size_t i = 0; i < d; ++i) {
            const S a = drow[i] * gain[i];
            mean_a += a;
            mean_ax += a * xrow[i];
            dgain[i] += drow[i] * xrow[i];
            dshift[i] += drow[i];
        }
        mean_a /= static_cast<S>(d);
        mean_ax /= static_cast<S>(d);
        S* dxrow = dx.data() + r * d;
        for (size_t i = 0; i < d; ++i)
            dxrow[i] = inv_std[r] * (drow[i] * gain[i] - mean_a - xrow[i] * mean_ax);
    }
    return dx;
}

template <typename S>
TensorT<S> dropout_mask(size_t rows, size_t cols, double p, bool training, Rng& rng) {
    TensorT<S> mask = TensorT<S>::full({rows, cols}, S(1));
    if (training && p > 0.0) {
        const S scale = static_cast<S>(1.0 / (1.0 - p));
        for (size_t i = 0; i < mask.size(); ++i)
            mask[i] = rng.uniform() < p ? S(0) : scale;
    }
    return mask;
}

} // namespace detail

template <typename S>
TensorT<S> transformer_forward(const ModelConfig& cfg, const ParamSet<S>& params,
                               const TensorT<S>& batch, bool training, Rng& rng,
                               TransformerTrace<S>* trace = nullptr) {
    if (batch.rank() != 3 || batch.extent(2) != kFeatDim)
        throw DimensionError("transformer_forward: expected [B x T x 63], got " +
                             batch.shape_str());
    const size_t b = batch.extent(0), t = batch.extent(1);
    const auto d = static_cast<size_t>(cfg.model_dim);
    const auto heads = static_cast<size_t>(cfg.heads);
    const size_t bt = b * t;

    TransformerTrace<S> local;
    TransformerTrace<S>& tr = trace ? *trace : local;
    const bool keep = trace != nullptr;
    tr.batch = b;
    tr.frames = t;
    if (keep) tr.layers.assign(static_cast<size_t>(cfg.layers), {});

    TensorT<S> input2d({bt, kFeatDim});
    std::copy_n(batch.data(), batch.size(), input2d.data());
    if (keep) tr.input2d = input2d;

    TensorT<S> x = matmul(input2d, params["embed.weight"]);
    detail::add_bias_rows(x, params["embed.bias"]);
    if (cfg.positional_encoding) {
        const TensorT<S> pe = positional_encoding<S>(t, d);
        for (size_t bi = 0; bi < b; ++bi)
            for (size_t ti = 0; ti < t; ++ti) {
                S* row = x.data() + (bi * t + ti) * d;
                const S* perow = pe.data() + ti * d;
                for (size_t i = 0; i < d; ++i) row[i] += perow[i];
            }
    }

    for (int layer = 0; layer < cfg.layers; ++layer) {
        const std::string p = "layer" + std::to_string(layer) + ".";
        TransformerLayerTrace<S> scratch;
        TransformerLayerTrace<S>& lt = keep ? tr.layers[static_cast<size_t>(layer)] : scratch;
        lt.x = x;

        lt.q = matmul(x, params[p + "attn.wq"]);
        detail::add_bias_rows(lt.q, params[p + "attn.bq"]);
        lt.k = matmul(x, params[p + "attn.wk"]);
        detail::add_bias_rows(lt.k, params[p + "attn.bk"]);
        lt.v = matmul(x, params[p + "attn.wv"]);
        detail::add_bias_rows(lt.v, params[p + "attn.bv"]);

        lt.probs = TensorT<S>({b, heads, t, t});
        lt.concat = TensorT<S>({bt, d});
        for (size_t bi = 0; bi < b; ++bi)
            detail::attention_core(lt.q.data() + bi * t * d, lt.k.data() + bi * t * d,
                                   lt.v.data() + bi * t * d, t, d, heads,
                                   lt.concat.data() + bi * t * d,
                                   lt.probs.data() + bi * heads * t * t);

        TensorT<S> attn = matmul(lt.concat, params[p + "attn.wo"]);
        detail::add_bias_rows(attn, params[p + "attn.bo"]);

        lt.mask1 = detail::dropout_mask<S>(bt, d, cfg.dropout, training, rng);
        TensorT<S> r1(x.shape());
        for (size_t i = 0; i < r1.size(); ++i) r1[i] = x[i] + attn[i] * lt.mask1[i];
        lt.n1 = detail::layer_norm_rows(r1, params[p + "ln1.gain"], params[p + "ln1.shift"],
                                        keep ? &lt.xhat1 : nullptr,
                                        keep ? &lt.inv_std1 : nullptr);

        lt.ffn_pre = matmul(lt.n1, params[p + "ffn.w1"]);
        detail::add_bias_rows(lt.ffn_pre, params[p + "ffn.b1"]);
        TensorT<S> act = relu(lt.ffn_pre);
        TensorT<S> ffn = matmul(act, params[p + "ffn.w2"]);
        detail::add_bias_rows(ffn, params[p + "ffn.b2"]);

        lt.mask2 = detail::dropout_mask<S>(bt, d, cfg.dropout, training, rng);
        TensorT<S> r2(x.shape());
        for (size_t i = 0; i < r2.size(); ++i) r2[i] = lt.n1[i] + ffn[i] * lt.mask2[i];
        x = detail::layer_norm_rows(r2, params[p + "ln2.gain"], params[p + "ln2.shift"],
                                    keep ? &lt.xhat2 : nullptr, keep ? &lt.inv_std2 : nullptr);
    }

    // Mean-pool over frame positions, then the class head.
    TensorT<S> pooled({b, d});
    const S inv_t = S(1) / static_cast<S>(t);
    for (size_t bi = 0; bi < b; ++bi)
        for (size_t ti = 0; ti < t; ++ti) {
            const S* row = x.data() + (bi * t + ti) * d;
            S* prow = pooled.data() + bi * d;
            for (size_t i = 0; i < d; ++i) prow[i] += row[i] * inv_t;
        }
    if (keep) tr.pooled = pooled;

    TensorT<S> logits = matmul(pooled, params["head.weight"]);
    detail::add_bias_rows(logits, params["head.bias"]);
    detail::check_op_output(logits, "transformer_forward");
    return logits;
}

template <typename S>
ParamSet<S> transformer_backward(const ModelConfig& cfg, const ParamSet<S>& params,
                                 const TransformerTrace<S>& tr, const TensorT<S>& dlogits) {
    const size_t b = tr.batch, t = tr.frames;
    const auto d = static_cast<size_t>(cfg.model_dim);
    const auto heads = static_cast<size_t>(cfg.heads);
    const size_t head_dim = d / heads;
    const size_t bt = b * t;
    const S scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(head_dim)));

    ParamSet<S> grads = ParamSet<S>::zeros_like(params);

    grads["head.weight"] = matmul_tn(tr.pooled, dlogits);
    {
        TensorT<S>& db = grads["head.bias"];
        for (size_t bi = 0; bi < b; ++bi)
            for (size_t k = 0; k < db.size(); ++k) db[k] += dlogits.at(bi, k);
    }
    const TensorT<S> dpooled = matmul_nt(dlogits, params["head.weight"]);

    TensorT<S> dx({bt, d});
    const S inv_t = S(1) / static_cast<S>(t);
    for (size_t bi = 0; bi < b; ++bi)
        for (size_t ti = 0; ti < t; ++ti) {
            S* row = dx.data() + (bi * t + ti) * d;
            const S* prow = dpooled.data() + bi * d;
            for (size_t i = 0; i < d; ++i) row[i] = prow[i] * inv_t;
        }

    for (int layer = cfg.layers - 1; layer >= 0; --layer) {
        const std::string p = "layer" + std::to_string(layer) + ".";
        const TransformerLayerTrace<S>& lt = tr.layers[static_cast<size_t>(layer)];

        // Second sublayer: x = LN2(n1 + dropout(FFN(n1))).
        TensorT<S> dr2 = detail::layer_norm_rows_backward(dx, lt.xhat2, lt.inv_std2,
                                                          params[p + "ln2.gain"],
                                                          grads[p + "ln2.gain"],
                                                          grads[p + "ln2.shift"]);
        TensorT<S> dn1 = dr2; // residual branch
        TensorT<S> dffn(dr2.shape());
        for (size_t i = 0; i < dffn.size(); ++i) dffn[i] = dr2[i] * lt.mask2[i];

        const TensorT<S> act = relu(lt.ffn_pre);
        {
            const TensorT<S> dw2 = matmul_tn(act, dffn);
            TensorT<S>& gw2 = grads[p + "ffn.w2"];
            for (size_t i = 0; i < gw2.size(); ++i) gw2[i] += dw2[i];
            TensorT<S>& gb2 = grads[p + "ffn.b2"];
            for (size_t r = 0; r < bt; ++r)
                for (size_t i = 0; i < d; ++i) gb2[i] += dffn.at(r, i);
        }
        TensorT<S> dact = matmul_nt(dffn, params[p + "ffn.w2"]);
        for (size_t i = 0; i < dact.size(); ++i)
            if (lt.ffn_pre[i] <= S(0)) dact[i] = S(0);
        {
            const TensorT<S> dw1 = matmul_tn(lt.n1, dact);
            TensorT<S>& gw1 = grads[p + "ffn.w1"];
            for (size_t i = 0; i < gw1.size(); ++i) gw1[i] += dw1[i];
            TensorT<S>& gb1 = grads[p + "ffn.b1"];
            const size_t dff = dact.extent(1);
            for (size_t r = 0; r < bt; ++r)
                for (size_t i = 0; i < dff; ++i) gb1[i] += dact.at(r, i);
        }
        {
            const TensorT<S> more = matmul_nt(dact, params[p + "ffn.w1"]);
            for (size_t i = 0; i < dn1.size(); ++i) dn1[i] += more[i];
        }

        // First sublayer: n1 = LN1(x + dropout(attention(x))).
        TensorT<S> dr1 = detail::layer_norm_rows_backward(dn1, lt.xhat1, lt.inv_std1,
                                                          params[p + "ln1.gain"],
                                                          grads[p + "ln1.gain"],
                                                          grads[p + "ln1.shift"]);
        dx = dr1; // residual branch
        TensorT<S> dattn(dr1.shape());
        for (size_t i = 0; i < dattn.size(); ++i) dattn[i] = dr1[i] * lt.mask1[i];

        {
            const TensorT<S> dwo = matmul_tn(lt.concat, dattn);
            TensorT<S>& gwo = grads[p + "attn.wo"];
            for (size_t i = 0; i < gwo.size(); ++i) gwo[i] += dwo[i];
            TensorT<S>& gbo = grads[p + "attn.bo"];
            for (size_t r = 0; r < bt; ++r)
                for (size_t i = 0; i < d; ++i) gbo[i] += dattn.at(r, i);
        }
        const TensorT<S> dconcat = matmul_nt(dattn, params[p + "attn.wo"]);

        TensorT<S> dq({bt, d});
        TensorT<S> dk({bt, d});
        TensorT<S> dv({bt, d});
        std::vector<S> dp(t * t), ds(t * t);
        for (size_t bi = 0; bi < b; ++bi) {
            const size_t base = bi * t * d;
            for (size_t h = 0; h < heads; ++h) {
                const size_t off = h * head_dim;
                const S* probs = lt.probs.data() + ((bi * heads) + h) * t * t;
                // dP = dO_h V_h^T ; dV_h = P^T dO_h
                for (size_t i = 0; i < t; ++i) {
                    const S* doh = dconcat.data() + base + i * d + off;
                    for (size_t j = 0; j < t; ++j) {
                        const S* vj = lt.v.data() + base + j * d + off;
                        S acc = 0;
                        for (size_t e = 0; e < head_dim; ++e) acc += doh[e] * vj[e];
                        dp[i * t + j] = acc;
                    }
                }
                for (size_t j = 0; j < t; ++j) {
                    S* dvj = dv.data() + base + j * d + off;
                    for (size_t i = 0; i < t; ++i) {
                        const S pij = probs[i * t + j];
                        const S* doh = dconcat.data() + base + i * d + off;
                        for (size_t e = 0; e < head_dim; ++e) dvj[e] += pij * doh[e];
                    }
                }
                // Softmax backward per row: dS = P * (dP - sum(dP * P)).
                for (size_t i = 0; i < t; ++i) {
                    S dot = 0;
                    for (size_t j = 0; j < t; ++j)
                        dot += dp[i * t + j] * probs[i * t + j];
                    for (size_t j = 0; j < t; ++j)
                        ds[i * t + j] = probs[i * t + j] * (dp[i * t + j] - dot);
                }
                // dQ_h = dS K_h * scale ; dK_h = dS^T Q_h * scale.
                for (size_t i = 0; i < t; ++i) {
                    S* dqi = dq.data() + base + i * d + off;
                    for (size_t j = 0; j < t; ++j) {
                        const S w = ds[i * t + j] * scale;
                        const S* kj = lt.k.data() + base + j * d + off;
                        for (size_t e = 0; e < head_dim; ++e) dqi[e] += w * kj[e];
                    }
                }
                for (size_t j = 0; j < t; ++j) {
                    S* dkj = dk.data() + base + j * d + off;
                    for (size_t i = 0; i < t; ++i) {
                        const S w = ds[i * t + j] * scale;
                        const S* qi = lt.q.data() + base + i * d + off;
                        for (size_t e = 0; e < head_dim; ++e) dkj[e] += w * qi[e];
                    }
                }
            }
        }

        auto accumulate_proj = [&](const char* w_name, const char* b_name,
                                   const TensorT<S>& dout) {
            const TensorT<S> dw = matmul_tn(lt.x, dout);
            TensorT<S>& gw = grads[p + w_name];
            for (size_t i = 0; i < gw.size(); ++i) gw[i] += dw[i];
            TensorT<S>& gb = grads[p + b_name];
            for (size_t r = 0; r < bt; ++r)
                for (size_t i = 0; i < d; ++i) gb[i] += dout.at(r, i);
            const TensorT<S> dxin = matmul_nt(dout, params[p + w_name]);
            for (size_t i = 0; i < dx.size(); ++i) dx[i] += dxin[i];
        };
        accumulate_proj("attn.wq", "attn.bq", dq);
        accumulate_proj("attn.wk", "attn.bk", dk);
        accumulate_proj("attn.wv", "attn.bv", dv);
    }

    // Input projection; positional encoding is additive and parameter-free.
    grads["embed.weight"] = matmul_tn(tr.input2d, dx);
    {
        TensorT<S>& gb = grads["embed.bias"];
        for (size_t r = 0; r < bt; ++r)
            for (size_t i = 0; i < d; ++i) gb[i] += dx.at(r, i);
    }
    return grads;
}

} // namespace slr
