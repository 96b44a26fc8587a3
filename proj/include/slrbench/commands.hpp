#pragma once

// CLI command entry points, callable in-process so tests can drive the
// exact code paths the binary runs. All failures surface as the shared
// error taxonomy; main() maps them to exit codes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slrbench/evaluate.hpp"
#include "slrbench/experiment.hpp"
#include "slrbench/folds.hpp"

namespace slr {

struct SynthArgs {
    int classes = 5;
    int signers = 6;
    int per_class = 40;
    uint64_t seed = 42;
    std::string out;
    bool force = false;
};

void cmd_synth(const SynthArgs& args);

struct TrainArgs {
    std::string config_file;
    std::string model; // convlstm | transformer
    int fold = 0;
    uint64_t seed = 42;
};

// Trains one (model, fold, seed) cell; writes checkpoint.slck, log.csv,
// result.json, test_manifest.json, and the resolved config into
// <out.dir>/<model>/<fold>/<seed>/. Returns the cell's test metrics.
CellResult cmd_train(const TrainArgs& args);

struct CrossvalArgs {
    std::string config_file;
    std::vector<std::string> models = {"convlstm", "transformer"};
    int jobs = 0; // 0 = hardware concurrency
};

// Runs the full folds x runs x models grid with cell-level resume, then
// aggregates into results.csv and comparison.md under <out.dir>.
std::vector<RunReport> cmd_crossval(const CrossvalArgs& args);

struct EvalArgs {
    std::string checkpoint;
    std::string manifest;
    int k = 0; // optional extra top-k to report
};

struct EvalOutput {
    EvalMetrics metrics;
    double top_k = 0.0; // only when k > 0
    size_t samples = 0;
};

// Evaluates a checkpoint over every sample in a manifest (eval pipeline:
// no alignment, no augmentation) and writes eval.csv next to the
// checkpoint.
EvalOutput cmd_eval(const EvalArgs& args);

// Shared plumbing, exposed for the test suites.
struct FoldData {
    std::vector<LandmarkSequence> train;
    std::vector<LandmarkSequence> val;
    std::vector<LandmarkSequence> test;
};

FoldData prepare_fold(const DatasetManifest& manifest, const FoldPlan& plan, int fold,
                      size_t dtw_width);

FoldPlan plan_for_config(const DatasetManifest& manifest, const ExperimentConfig& config);

std::filesystem::path cell_dir(const ExperimentConfig& config, const std::string& model,
                               int fold, uint64_t seed);

} // namespace slr
