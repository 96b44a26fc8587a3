#pragma once

// Synthetic landmark dataset for desk-scale experiments.
//
// Each class is a distinct parametric hand trajectory (fundamental
// frequency, harmonic mix, per-landmark phase pattern). Each signer
// contributes a persistent deformation: spatial scale, global offset, a
// monotone time warp, and a small static pose shift. Samples add fresh
// noise and a random native length in [40, 90] frames. Labels and signers
// are dealt round-robin so every signer appears in every class.

#include <filesystem>

#include "slrbench/landmark.hpp"
#include "slrbench/rng.hpp"

namespace slr {

struct SynthDataset {
    DatasetManifest manifest;
    std::vector<LandmarkSequence> sequences; // same order as manifest.samples
};

SynthDataset synth_generate(int classes, int signers, int samples_per_class, const Rng& rng);

// Writes samples/<id>.slrb files plus manifest.json under `dir`.
void write_dataset(const std::filesystem::path& dir, const SynthDataset& dataset);

} // namespace slr
