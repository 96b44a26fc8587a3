#pragma once

// Learning-rate and curriculum schedules.

#include <cstddef>
#include <vector>

#include "slrbench/common.hpp"

namespace slr {

// Cosine annealing within one cycle; x in [0, 1] is the fractional
// position. Written so x=0 returns exactly `max` and x=1 exactly `base`.
double cyclical_cosine_lr(double x, double base = 1e-4, double max = 3e-3);

// Epoch-indexed learning rate with warm restarts every `cycle_epochs`.
double lr_for_epoch(int epoch, int cycle_epochs, double base = 1e-4, double max = 3e-3);

// Progressive sequence lengths: switch_epochs are the epochs at which the
// next length takes over (lengths has one more entry than switch_epochs).
int curriculum_length(int epoch, const std::vector<int>& switch_epochs,
                      const std::vector<int>& lengths);

// Frame indices for subsampling a 64-frame sequence down to `length`:
// exact strides when length divides 64, otherwise floor(k*63/(length-1)).
std::vector<size_t> curriculum_indices(int length, int full_length = 64);

} // namespace slr
