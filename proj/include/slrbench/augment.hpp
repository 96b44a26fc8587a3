#pragma once

// Training-time augmentations: temporal jitter, in-plane rotation about
// the wrist, Gaussian coordinate noise. Each has a deterministic core that
// takes the drawn parameter explicitly, plus an Rng-drawing wrapper; tests
// pin the parameter, training draws fresh values per sample and epoch.

#include "slrbench/landmark.hpp"
#include "slrbench/rng.hpp"

namespace slr {

// Re-evaluates the sequence's spline at times scaled by `speed`, keeping
// 64 output frames. speed > 1 plays the content faster (trajectory values
// advance quicker along the frame axis).
LandmarkSequence temporal_jitter(const LandmarkSequence& seq, double speed);

// Rotates each landmark's (x, y) about the origin; z is untouched. The
// same angle applies to every frame. Radians.
LandmarkSequence rotate_xy(const LandmarkSequence& seq, double angle);

// Adds i.i.d. Normal(0, sigma^2) to every coordinate.
LandmarkSequence add_noise(const LandmarkSequence& seq, Rng& rng, double sigma = 0.01);

// Draws speed ~ U[0.95, 1.05].
LandmarkSequence augment_temporal_jitter(const LandmarkSequence& seq, Rng& rng);

// Draws angle ~ U[-15 deg, +15 deg].
LandmarkSequence augment_rotate(const LandmarkSequence& seq, Rng& rng);

// Full per-sample chain in training order: jitter -> rotate -> noise.
LandmarkSequence augment_sample(const LandmarkSequence& seq, Rng& rng, double noise_sigma = 0.01);

} // namespace slr
