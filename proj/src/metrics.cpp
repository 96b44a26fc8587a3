#include "slrbench/metrics.hpp"

namespace slr {

double top_k_accuracy(const TensorF& logits, const std::vector<int>& truths, int k) {
    if (logits.rank() != 2) throw DimensionError("top_k_accuracy: logits must be [N x K]");
    const size_t n = logits.extent(0), classes = logits.extent(1);
    if (n == 0) throw ProtocolError("top_k_accuracy: empty evaluation set");
    if (truths.size() != n)
        throw DimensionError("top_k_accuracy: truth count does not match logit rows");
    if (k < 1 || static_cast<size_t>(k) > classes)
        throw ParameterError("top_k_accuracy: k must be in [1, K]");

    size_t hits = 0;
    for (size_t i = 0; i < n; ++i) {
        const int truth = truths[i];
        if (truth < 0 || static_cast<size_t>(truth) >= classes)
            throw ParameterError("top_k_accuracy: truth index out of range");
        const float* row = logits.data() + i * classes;
        const float truth_logit = row[static_cast<size_t>(truth)];
        // Rank of the truth: classes that beat it outright, plus ties with
        // a lower class index.
        size_t rank = 0;
        for (size_t j = 0; j < classes; ++j) {
            if (row[j] > truth_logit ||
                (row[j] == truth_logit && j < static_cast<size_t>(truth)))
                ++rank;
        }
        if (rank < static_cast<size_t>(k)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

} // namespace slr
