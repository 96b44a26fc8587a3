#pragma once

// Model configuration, named parameter sets, and initialization shared by
// the ConvLSTM and Transformer classifiers. Both models expose the same
// contract: Tensor[B x T x 63] -> logits[B x num_classes].

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "slrbench/rng.hpp"
#include "slrbench/tensor.hpp"

namespace slr {

enum class ModelKind { convlstm, transformer };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelConfig {
    ModelKind kind = ModelKind::transformer;
    int num_classes = 0;
    int conv_filters = 128;
    int lstm_units = 256;
    int layers = 6;
    int heads = 8;
    int model_dim = 512;
    int ffn_dim = 2048;
    double dropout = 0.3;
    bool positional_encoding = true;

    void validate() const;

    // Flattened conv output per frame: 21 x 3 grid times conv_filters.
    int conv_feature_dim() const { return static_cast<int>(kLandmarkGrid) * conv_filters; }

    static constexpr size_t kLandmarkGrid = 63; // 21 x 3 spatial cells

    bool operator==(const ModelConfig&) const = default;
};

struct ShapeEntry {
    std::string name;
    std::vector<size_t> shape;

    bool operator==(const ShapeEntry&) const = default;
};

// Parameter shapes are a pure function of the config; checkpoints and
// gradients are validated against this manifest.
std::vector<ShapeEntry> shape_manifest(const ModelConfig& config);

template <typename S>
class ParamSet {
  public:
    void add(std::string name, TensorT<S> tensor) {
        names_.push_back(std::move(name));
        tensors_.push_back(std::move(tensor));
    }

    size_t count() const { return tensors_.size(); }
    const std::string& name(size_t i) const { return names_[i]; }
    TensorT<S>& tensor(size_t i) { return tensors_[i]; }
    const TensorT<S>& tensor(size_t i) const { return tensors_[i]; }

    TensorT<S>& operator[](std::string_view name) {
        return tensors_[index_of(name)];
    }
    const TensorT<S>& operator[](std::string_view name) const {
        return tensors_[index_of(name)];
    }

    size_t total_values() const {
        size_t n = 0;
        for (const auto& t : tensors_) n += t.size();
        return n;
    }

    static ParamSet zeros_like(const ParamSet& other) {
        ParamSet out;
        for (size_t i = 0; i < other.count(); ++i)
            out.add(other.names_[i], TensorT<S>(other.tensors_[i].shape()));
        return out;
    }

    template <typename T>
    ParamSet<T> cast() const {
        ParamSet<T> out;
        for (size_t i = 0; i < count(); ++i)
            out.add(names_[i], tensors_[i].template cast<T>());
        return out;
    }

  private:
    size_t index_of(std::string_view name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw ParameterError("ParamSet: unknown parameter " + std::string(name));
    }

    template <typename>
    friend class ParamSet;

    std::vector<std::string> names_;
    std::vector<TensorT<S>> tensors_;
};

// Glorot-uniform weights, zero biases, LSTM forget-gate bias 1, layer-norm
// gain 1 / shift 0. Draws come from per-tensor child streams, so the
// result depends only on (rng seed/stream, config).
template <typename S>
ParamSet<S> init_params(const ModelConfig& config, const Rng& rng);

// Checks a parameter set against the config-derived shape manifest.
template <typename S>
void validate_params(const ModelConfig& config, const ParamSet<S>& params);

extern template ParamSet<float> init_params<float>(const ModelConfig&, const Rng&);
extern template ParamSet<double> init_params<double>(const ModelConfig&, const Rng&);
extern template void validate_params<float>(const ModelConfig&, const ParamSet<float>&);
extern template void validate_params<double>(const ModelConfig&, const ParamSet<double>&);

} // namespace slr
