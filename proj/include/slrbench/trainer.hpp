#pragma once

// The training protocol: AdamW with decoupled decay, cosine cycles with
// warm restarts, gradient clipping, label smoothing, per-epoch
// augmentation, progressive sequence lengths, and early stopping on
// validation loss. Deterministic given (config, data, run seed).

#include <cstdint>
#include <limits>
#include <vector>

#include "slrbench/landmark.hpp"
#include "slrbench/model.hpp"

namespace slr {

struct TrainConfig {
    int epochs = 50;
    int batch_size = 64;
    double lr_base = 1e-4;
    double lr_max = 3e-3;
    int cycle_epochs = 10;
    double weight_decay = 1e-5;
    double clip_norm = 1.0;
    double label_smoothing = 0.1;
    int patience = 10;
    std::vector<int> curriculum_epochs = {10, 25, 40};
    std::vector<int> curriculum_lengths = {16, 32, 48, 64};
    double noise_sigma = 0.01;
    size_t dtw_width = 10;
    uint64_t seed = 42;
    int runs = 3;
    int folds = 5;

    void validate() const;
};

struct EpochRow {
    int epoch = 0;
    double lr = 0.0;
    int curriculum_frames = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_top1 = 0.0;
    double val_top5 = 0.0;
};

// Minimum-validation-loss tracking with zero min-delta: any strictly
// better loss resets the patience counter.
struct EarlyStopState {
    double best_loss = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    int since_improvement = 0;

    // Returns true when this epoch set a new best.
    bool observe(int epoch, double val_loss) {
        if (val_loss < best_loss) {
            best_loss = val_loss;
            best_epoch = epoch;
            since_improvement = 0;
            return true;
        }
        ++since_improvement;
        return false;
    }

    bool should_stop(int patience) const { return since_improvement >= patience; }
};

struct FitResult {
    ParamSet<float> best_params;
    int best_epoch = -1;
    double best_val_loss = 0.0;
    int epochs_run = 0;
    std::vector<EpochRow> log;
};

// Both sample lists must be standardized to 64 frames and signer-disjoint.
FitResult fit(const ModelConfig& model_config, const TrainConfig& train_config,
              const std::vector<LandmarkSequence>& train,
              const std::vector<LandmarkSequence>& val, uint64_t run_seed);

// Epoch log CSV (one row per epoch, fixed column order).
void write_epoch_log(const std::filesystem::path& path, const std::vector<EpochRow>& rows);

} // namespace slr
