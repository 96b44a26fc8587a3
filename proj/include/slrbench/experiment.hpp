#pragma once

// Experiment configuration: a flat key-value file with dotted sections
// (data.*, model.*, train.*, out.*, run.*). Every key has a default;
// unknown keys are hard errors so hyperparameter typos cannot pass
// silently. The resolved form is written next to every output.

#include <filesystem>
#include <string>

#include "slrbench/model.hpp"
#include "slrbench/trainer.hpp"

namespace slr {

struct ExperimentConfig {
    std::string data_root;
    std::string dataset_name = "dataset";
    std::string out_dir = "out";
    bool checked = true;
    ModelConfig model; // num_classes 0 means "take it from the manifest"
    TrainConfig train;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Deterministic rendering of every key (sorted, fixed float format).
std::string render_config(const ExperimentConfig& config);
void write_resolved_config(const std::filesystem::path& path, const ExperimentConfig& config);

} // namespace slr
