#include "slrbench/model.hpp"

#include <cmath>

#include "slrbench/landmark.hpp"

namespace slr {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::convlstm ? "convlstm" : "transformer";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "convlstm") return ModelKind::convlstm;
    if (name == "transformer") return ModelKind::transformer;
    throw ParameterError("unknown model kind '" + name + "' (expected convlstm or transformer)");
}

void ModelConfig::validate() const {
    if (num_classes <= 0) throw ParameterError("model: num_classes must be positive");
    if (conv_filters <= 0 || lstm_units <= 0 || layers <= 0 || heads <= 0 || model_dim <= 0 ||
        ffn_dim <= 0)
        throw ParameterError("model: all extents must be positive");
    if (model_dim % heads != 0)
        throw ParameterError("model: model_dim " + std::to_string(model_dim) +
                             " is not divisible by heads " + std::to_string(heads));
    if (dropout < 0.0 || dropout >= 1.0)
        throw ParameterError("model: dropout must be in [0, 1)");
}

std::vector<ShapeEntry> shape_manifest(const ModelConfig& config) {
    config.validate();
    std::vector<ShapeEntry> entries;
    const auto k = static_cast<size_t>(config.num_classes);

    if (config.kind == ModelKind::convlstm) {
        const auto f = static_cast<size_t>(config.conv_filters);
        const auto h = static_cast<size_t>(config.lstm_units);
        const auto df = static_cast<size_t>(config.conv_feature_dim());
        entries.push_back({"conv.kernels", {3, 3, 1, f}});
        entries.push_back({"conv.bias", {f}});
        entries.push_back({"lstm.w_x", {df, 4 * h}});
        entries.push_back({"lstm.w_h", {h, 4 * h}});
        entries.push_back({"lstm.bias", {4 * h}});
        entries.push_back({"head.weight", {h, k}});
        entries.push_back({"head.bias", {k}});
        return entries;
    }

    const auto d = static_cast<size_t>(config.model_dim);
    const auto dff = static_cast<size_t>(config.ffn_dim);
    entries.push_back({"embed.weight", {kFeatDim, d}});
    entries.push_back({"embed.bias", {d}});
    for (int l = 0; l < config.layers; ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        entries.push_back({p + "attn.wq", {d, d}});
        entries.push_back({p + "attn.bq", {d}});
        entries.push_back({p + "attn.wk", {d, d}});
        entries.push_back({p + "attn.bk", {d}});
        entries.push_back({p + "attn.wv", {d, d}});
        entries.push_back({p + "attn.bv", {d}});
        entries.push_back({p + "attn.wo", {d, d}});
        entries.push_back({p + "attn.bo", {d}});
        entries.push_back({p + "ln1.gain", {d}});
        entries.push_back({p + "ln1.shift", {d}});
        entries.push_back({p + "ffn.w1", {d, dff}});
        entries.push_back({p + "ffn.b1", {dff}});
        entries.push_back({p + "ffn.w2", {dff, d}});
        entries.push_back({p + "ffn.b2", {d}});
        entries.push_back({p + "ln2.gain", {d}});
        entries.push_back({p + "ln2.shift", {d}});
    }
    entries.push_back({"head.weight", {d, k}});
    entries.push_back({"head.bias", {k}});
    return entries;
}

namespace {

// Fan extents for Glorot bounds. LSTM stacks its four gates column-wise,
// so the per-gate fan-out is a quarter of the stacked width.
void glorot_fans(const std::string& name, const std::vector<size_t>& shape, double& fan_in,
                 double& fan_out) {
    if (name == "conv.kernels") {
        fan_in = 9.0 * static_cast<double>(shape[2]);
        fan_out = 9.0 * static_cast<double>(shape[3]);
    } else if (name == "lstm.w_x" || name == "lstm.w_h") {
        fan_in = static_cast<double>(shape[0]);
        fan_out = static_cast<double>(shape[1] / 4);
    } else {
        fan_in = static_cast<double>(shape[0]);
        fan_out = static_cast<double>(shape[1]);
    }
}

} // namespace

template <typename S>
ParamSet<S> init_params(const ModelConfig& config, const Rng& rng) {
    ParamSet<S> params;
    for (const auto& entry : shape_manifest(config)) {
        TensorT<S> t(entry.shape);
        // Every rank>=2 tensor in the manifest is a weight; vectors are
        // biases, gains, or shifts.
        if (entry.shape.size() >= 2) {
            double fan_in = 0.0, fan_out = 0.0;
            glorot_fans(entry.name, entry.shape, fan_in, fan_out);
            const double bound = std::sqrt(6.0 / (fan_in + fan_out));
            Rng stream = rng.child("init/" + entry.name);
            for (size_t i = 0; i < t.size(); ++i)
                t[i] = static_cast<S>(stream.uniform(-bound, bound));
        } else if (entry.name.ends_with(".gain")) {
            for (size_t i = 0; i < t.size(); ++i) t[i] = S(1);
        } else if (entry.name == "lstm.bias") {
            // Gate order is [input, forget, candidate, output]; start with
            // an open forget gate.
            const size_t h = entry.shape[0] / 4;
            for (size_t i = h; i < 2 * h; ++i) t[i] = S(1);
        }
        params.add(entry.name, std::move(t));
    }
    return params;
}

template <typename S>
void validate_params(const ModelConfig& config, const ParamSet<S>& params) {
    const auto manifest = shape_manifest(config);
    if (manifest.size() != params.count())
        throw FormatError("params: expected " + std::to_string(manifest.size()) +
                          " tensors, got " + std::to_string(params.count()));
    for (size_t i = 0; i < manifest.size(); ++i) {
        if (params.name(i) != manifest[i].name)
            throw FormatError("params: tensor " + std::to_string(i) + " is '" + params.name(i) +
                              "', manifest says '" + manifest[i].name + "'");
        if (params.tensor(i).shape() != manifest[i].shape)
            throw FormatError("params: shape mismatch for " + manifest[i].name);
    }
}

template ParamSet<float> init_params<float>(const ModelConfig&, const Rng&);
template ParamSet<double> init_params<double>(const ModelConfig&, const Rng&);
template void validate_params<float>(const ModelConfig&, const ParamSet<float>&);
template void validate_params<double>(const ModelConfig&, const ParamSet<double>&);

} // namespace slr
