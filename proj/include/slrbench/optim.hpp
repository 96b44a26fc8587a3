#pragma once

// AdamW (decoupled weight decay) and global-norm gradient clipping.

#include <cmath>

#include "slrbench/model.hpp"

namespace slr {

template <typename S>
struct AdamState {
    std::vector<TensorT<S>> m;
    std::vector<TensorT<S>> v;
    int64_t step = 0;

    static AdamState for_params(const ParamSet<S>& params) {
        AdamState state;
        for (size_t i = 0; i < params.count(); ++i) {
            state.m.emplace_back(params.tensor(i).shape());
            state.v.emplace_back(params.tensor(i).shape());
        }
        return state;
    }
};

struct AdamHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Decay is decoupled and applied before the Adam update:
//   p <- p - lr * wd * p;  then the bias-corrected Adam step.
template <typename S>
void adamw_step(ParamSet<S>& params, const ParamSet<S>& grads, AdamState<S>& state, double lr,
                double weight_decay, const AdamHyper& hp = {}) {
    if (params.count() != grads.count() || params.count() != state.m.size())
        throw DimensionError("adamw_step: parameter/gradient/state counts differ");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(hp.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(hp.beta2, static_cast<double>(state.step));

    for (size_t i = 0; i < params.count(); ++i) {
        TensorT<S>& p = params.tensor(i);
        const TensorT<S>& g = grads.tensor(i);
        if (!p.same_shape(g))
            throw DimensionError("adamw_step: gradient shape mismatch for " + params.name(i));
        TensorT<S>& m = state.m[i];
        TensorT<S>& v = state.v[i];
        for (size_t j = 0; j < p.size(); ++j) {
            const double grad = g[j];
            double pj = p[j];
            pj -= lr * weight_decay * pj;
            const double mj = hp.beta1 * m[j] + (1.0 - hp.beta1) * grad;
            const double vj = hp.beta2 * v[j] + (1.0 - hp.beta2) * grad * grad;
            m[j] = static_cast<S>(mj);
            v[j] = static_cast<S>(vj);
            const double m_hat = mj / bc1;
            const double v_hat = vj / bc2;
            p[j] = static_cast<S>(pj - lr * m_hat / (std::sqrt(v_hat) + hp.eps));
        }
        if (checked_mode()) p.ensure_finite("adamw_step");
    }
}

// Scales all gradients by max_norm / ||g|| when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm.
template <typename S>
double clip_global_norm(ParamSet<S>& grads, double max_norm) {
    double sq = 0.0;
    for (size_t i = 0; i < grads.count(); ++i)
        for (size_t j = 0; j < grads.tensor(i).size(); ++j) {
            const double g = grads.tensor(i)[j];
            sq += g * g;
        }
    const double norm = std::sqrt(sq);
    if (norm > max_norm && norm > 0.0) {
        const double scale = max_norm / norm;
        for (size_t i = 0; i < grads.count(); ++i)
            for (size_t j = 0; j < grads.tensor(i).size(); ++j)
                grads.tensor(i)[j] = static_cast<S>(grads.tensor(i)[j] * scale);
    }
    return norm;
}

} // namespace slr
