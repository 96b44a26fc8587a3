#pragma once

// Per-sample preprocessing. The pipeline order is fixed:
//   wrist_center -> zscore -> [train only: align_to_template] -> resample_cubic
// Training tensors entering a model are always 64 frames x 63 features.

#include "slrbench/landmark.hpp"

namespace slr {

// Subtracts the wrist (landmark 0) coordinates from all 21 landmarks,
// frame by frame. Landmark 0 becomes exactly (0,0,0).
LandmarkSequence wrist_center(const LandmarkSequence& seq);

// Per feature dimension over the sample's frames: subtract the mean,
// divide by (population std + 1e-8).
LandmarkSequence zscore(const LandmarkSequence& seq);

// wrist_center -> zscore -> resample to 64 frames. The evaluation-side
// pipeline (no alignment, no augmentation).
LandmarkSequence standardize_eval(const LandmarkSequence& seq);

// wrist_center -> zscore -> align to template -> resample to 64 frames.
// The template must already be wrist-centered and z-scored.
LandmarkSequence standardize_train(const LandmarkSequence& seq, const LandmarkSequence& tmpl,
                                   size_t dtw_width);

} // namespace slr
