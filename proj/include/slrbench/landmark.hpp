#pragma once

// Landmark sequences and dataset manifests.
//
// A sample is T frames of 63 features: 21 hand landmarks x (x, y, z),
// wrist first. On disk a sample is an SLRB file (see docs in README):
// "SLRB" magic, u32 version=1, u32 num_frames, u32 feat_dim=63, then
// num_frames*feat_dim float32 little-endian values, row-major, no padding.

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "slrbench/common.hpp"

namespace slr {

inline constexpr size_t kLandmarks = 21;
inline constexpr size_t kFeatDim = 63; // 21 landmarks x 3 coordinates
inline constexpr size_t kStandardFrames = 64;

struct LandmarkSequence {
    std::vector<float> frames; // row-major, num_frames() x kFeatDim
    int label = -1;
    std::string signer;
    std::string id;

    size_t num_frames() const { return frames.size() / kFeatDim; }

    float* frame(size_t t) { return frames.data() + t * kFeatDim; }
    const float* frame(size_t t) const { return frames.data() + t * kFeatDim; }

    float& at(size_t t, size_t f) { return frames[t * kFeatDim + f]; }
    float at(size_t t, size_t f) const { return frames[t * kFeatDim + f]; }
};

struct SampleInfo {
    std::string id;
    int label = 0;
    std::string signer;
    std::string file; // relative to the manifest directory
    size_t num_frames = 0;
};

struct DatasetManifest {
    int num_classes = 0;
    std::vector<SampleInfo> samples;
    std::set<std::string> signers;
    std::filesystem::path root; // directory the manifest was loaded from

    const SampleInfo& find(const std::string& sample_id) const;
};

// SLRB sample files. Loading fails closed: bad magic/version/shape or a
// truncated payload is a FormatError, non-finite values a DataError.
void save_slrb(const std::filesystem::path& path, const LandmarkSequence& seq);
LandmarkSequence load_slrb(const std::filesystem::path& path);

// Manifest JSON: {"classes": N, "samples": [{"id","label","signer","file","frames"}]}.
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& path);

// Loads one sample through the manifest, joining id/label/signer metadata
// and cross-checking the stored frame count.
LandmarkSequence load_sequence(const DatasetManifest& manifest, const SampleInfo& info);

} // namespace slr
