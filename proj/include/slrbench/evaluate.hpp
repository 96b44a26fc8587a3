#pragma once

// Held-out evaluation and cross-run aggregation.

#include <string>
#include <vector>

#include "slrbench/landmark.hpp"
#include "slrbench/model.hpp"

namespace slr {

struct EvalMetrics {
    double top1 = 0.0;
    double top5 = 0.0;
};

// Deterministic forward passes (training off) over standardized samples.
EvalMetrics evaluate_model(const ModelConfig& config, const ParamSet<float>& params,
                           const std::vector<LandmarkSequence>& samples, int batch_size = 64);

struct CellResult {
    std::string model;
    int fold = 0;
    uint64_t seed = 0;
    double top1 = 0.0;
    double top5 = 0.0;
};

struct RunReport {
    std::string model;
    std::string dataset;
    std::vector<CellResult> cells; // complete folds x runs grid
    double top1_mean = 0.0, top1_std = 0.0;
    double top5_mean = 0.0, top5_std = 0.0;
};

// Mean and sample standard deviation over the full grid; an incomplete or
// duplicated grid is a protocol error.
RunReport aggregate(const std::string& model, const std::string& dataset,
                    const std::vector<CellResult>& cells, int folds, int runs);

// model,dataset,fold,seed,top1,top5 per cell, then mean/std rows per model.
void write_results_csv(const std::filesystem::path& path, const std::vector<RunReport>& reports);

// Markdown comparison table: one row per model, Top-1/Top-5 columns.
void write_markdown_table(const std::filesystem::path& path,
                          const std::vector<RunReport>& reports);

} // namespace slr
