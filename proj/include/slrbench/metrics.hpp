#pragma once

// Top-k accuracy with a deterministic tie rule: classes tied with the
// k-th highest logit are admitted in ascending class-index order.

#include <vector>

#include "slrbench/tensor.hpp"

namespace slr {

// logits: [N x K]; truths: N class indices. Returns the fraction of rows
// whose truth ranks strictly inside the top k under the tie rule.
double top_k_accuracy(const TensorF& logits, const std::vector<int>& truths, int k);

} // namespace slr
