#pragma once

// Kind-dispatching wrapper so training and evaluation stay architecture
// agnostic: both models share the contract [B x T x 63] -> logits.

#include "slrbench/convlstm.hpp"
#include "slrbench/transformer.hpp"

namespace slr {

template <typename S>
class Classifier {
  public:
    Classifier(ModelConfig config, ParamSet<S> params)
        : cfg_(std::move(config)), params_(std::move(params)) {
        validate_params(cfg_, params_);
    }

    static Classifier initialized(const ModelConfig& config, const Rng& rng) {
        return Classifier(config, init_params<S>(config, rng));
    }

    const ModelConfig& config() const { return cfg_; }
    ParamSet<S>& params() { return params_; }
    const ParamSet<S>& params() const { return params_; }

    // keep_trace must be true for a subsequent backward() call.
    TensorT<S> forward(const TensorT<S>& batch, bool training, Rng& rng,
                       bool keep_trace = false) {
        if (cfg_.kind == ModelKind::convlstm)
            return convlstm_forward(cfg_, params_, batch, training, rng,
                                    keep_trace ? &conv_trace_ : nullptr);
        return transformer_forward(cfg_, params_, batch, training, rng,
                                   keep_trace ? &xfm_trace_ : nullptr);
    }

    TensorT<S> infer(const TensorT<S>& batch) const {
        Rng unused(0, "inference");
        if (cfg_.kind == ModelKind::convlstm)
            return convlstm_forward<S>(cfg_, params_, batch, false, unused, nullptr);
        return transformer_forward<S>(cfg_, params_, batch, false, unused, nullptr);
    }

    ParamSet<S> backward(const TensorT<S>& dlogits) const {
        if (cfg_.kind == ModelKind::convlstm)
            return convlstm_backward(cfg_, params_, conv_trace_, dlogits);
        return transformer_backward(cfg_, params_, xfm_trace_, dlogits);
    }

  private:
    ModelConfig cfg_;
    ParamSet<S> params_;
    ConvLstmTrace<S> conv_trace_;
    TransformerTrace<S> xfm_trace_;
};

} // namespace slr
