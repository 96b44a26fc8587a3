#pragma once

// Checkpoint container: "SLCK" magic, version, a JSON header carrying the
// model config and the parameter shape manifest, float32 little-endian
// payloads in manifest order, and a trailing CRC32 over all preceding
// bytes. Loading verifies the checksum before touching any payload and
// validates every shape against the config.

#include <filesystem>

#include "slrbench/model.hpp"

namespace slr {

struct Checkpoint {
    ModelConfig config;
    ParamSet<float> params;
};

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const ParamSet<float>& params);

Checkpoint load_checkpoint(const std::filesystem::path& path);

uint32_t crc32(const void* data, size_t length, uint32_t seed = 0);

} // namespace slr
