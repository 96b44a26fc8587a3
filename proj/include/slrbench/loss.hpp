#pragma once

// Label-smoothed cross entropy. Targets become
// q = (1 - eps) * onehot + eps / K; the batch-mean loss has the closed-form
// logits gradient (softmax(logits) - q) / B.

#include <vector>

#include "slrbench/tensor.hpp"

namespace slr {

template <typename S>
struct LossResult {
    double loss = 0.0;
    TensorT<S> dlogits;
};

template <typename S>
LossResult<S> label_smoothed_loss(const TensorT<S>& logits, const std::vector<int>& targets,
                                  double epsilon) {
    if (logits.rank() != 2) throw DimensionError("loss: logits must be [B x K]");
    const size_t b = logits.extent(0), k = logits.extent(1);
    if (k < 2) throw ParameterError("loss: need at least 2 classes");
    if (targets.size() != b)
        throw DimensionError("loss: " + std::to_string(targets.size()) + " targets for batch " +
                             std::to_string(b));
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw ParameterError("loss: label smoothing must be in [0, 1)");

    LossResult<S> result;
    result.dlogits = TensorT<S>(logits.shape());
    const double uniform = epsilon / static_cast<double>(k);
    const double inv_b = 1.0 / static_cast<double>(b);

    for (size_t bi = 0; bi < b; ++bi) {
        const int target = targets[bi];
        if (target < 0 || static_cast<size_t>(target) >= k)
            throw ParameterError("loss: target " + std::to_string(target) + " outside [0, " +
                                 std::to_string(k) + ")");
        const S* row = logits.data() + bi * k;
        double hi = row[0];
        for (size_t j = 1; j < k; ++j) hi = std::max<double>(hi, row[j]);
        double sum = 0.0;
        for (size_t j = 0; j < k; ++j) sum += std::exp(static_cast<double>(row[j]) - hi);
        const double log_z = hi + std::log(sum);

        for (size_t j = 0; j < k; ++j) {
            const double q = uniform + (static_cast<size_t>(target) == j ? 1.0 - epsilon : 0.0);
            const double log_p = static_cast<double>(row[j]) - log_z;
            result.loss -= q * log_p * inv_b;
            const double p = std::exp(log_p);
            result.dlogits[bi * k + j] = static_cast<S>((p - q) * inv_b);
        }
    }
    return result;
}

} // namespace slr
