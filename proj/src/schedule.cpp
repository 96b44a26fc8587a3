#include "slrbench/schedule.hpp"

#include <cmath>

namespace slr {

double cyclical_cosine_lr(double x, double base, double max) {
    if (x < 0.0 || x > 1.0) throw ParameterError("cyclical_cosine_lr: x must be in [0, 1]");
    const double c = std::cos(M_PI * x);
    // Affine in c; the endpoints are exact because the opposite weight
    // vanishes there.
    return 0.5 * (1.0 - c) * base + 0.5 * (1.0 + c) * max;
}

double lr_for_epoch(int epoch, int cycle_epochs, double base, double max) {
    if (epoch < 0) throw ParameterError("lr_for_epoch: epoch must be non-negative");
    if (cycle_epochs <= 0) throw ParameterError("lr_for_epoch: cycle length must be positive");
    const int within = epoch % cycle_epochs;
    return cyclical_cosine_lr(static_cast<double>(within) / static_cast<double>(cycle_epochs),
                              base, max);
}

int curriculum_length(int epoch, const std::vector<int>& switch_epochs,
                      const std::vector<int>& lengths) {
    if (epoch < 0) throw ParameterError("curriculum_length: epoch must be non-negative");
    if (lengths.size() != switch_epochs.size() + 1)
        throw ParameterError("curriculum_length: need one more length than switch epoch");
    size_t stage = 0;
    while (stage < switch_epochs.size() && epoch >= switch_epochs[stage]) ++stage;
    return lengths[stage];
}

std::vector<size_t> curriculum_indices(int length, int full_length) {
    if (length < 2 || length > full_length)
        throw ParameterError("curriculum_indices: length must be in [2, " +
                             std::to_string(full_length) + "]");
    std::vector<size_t> idx(static_cast<size_t>(length));
    if (full_length % length == 0) {
        const size_t stride = static_cast<size_t>(full_length / length);
        for (size_t k = 0; k < idx.size(); ++k) idx[k] = k * stride;
    } else {
        for (size_t k = 0; k < idx.size(); ++k)
            idx[k] = k * static_cast<size_t>(full_length - 1) / static_cast<size_t>(length - 1);
    }
    return idx;
}

} // namespace slr
