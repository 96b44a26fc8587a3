#include "slrbench/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "slrbench/augment.hpp"
#include "slrbench/classifier.hpp"
#include "slrbench/loss.hpp"
#include "slrbench/metrics.hpp"
#include "slrbench/optim.hpp"
#include "slrbench/schedule.hpp"

namespace slr {

void TrainConfig::validate() const {
    if (epochs < 1 || batch_size < 1) throw ParameterError("train: epochs/batch_size must be positive");
    if (!(lr_base < lr_max)) throw ParameterError("train: lr_base must be below lr_max");
    if (cycle_epochs < 1) throw ParameterError("train: cycle_epochs must be positive");
    if (label_smoothing < 0.0 || label_smoothing >= 1.0)
        throw ParameterError("train: label_smoothing must be in [0, 1)");
    if (patience < 1) throw ParameterError("train: patience must be positive");
    if (clip_norm <= 0.0) throw ParameterError("train: clip_norm must be positive");
    if (weight_decay < 0.0) throw ParameterError("train: weight_decay must be non-negative");
    if (noise_sigma < 0.0) throw ParameterError("train: noise_sigma must be non-negative");
    if (runs < 1 || folds < 1) throw ParameterError("train: runs/folds must be positive");
    if (curriculum_lengths.size() != curriculum_epochs.size() + 1)
        throw ParameterError("train: need one more curriculum length than switch epoch");
    for (size_t i = 1; i < curriculum_epochs.size(); ++i)
        if (curriculum_epochs[i] <= curriculum_epochs[i - 1])
            throw ParameterError("train: curriculum epochs must be strictly increasing");
    for (size_t i = 1; i < curriculum_lengths.size(); ++i)
        if (curriculum_lengths[i] <= curriculum_lengths[i - 1])
            throw ParameterError("train: curriculum lengths must be strictly increasing");
    if (curriculum_lengths.back() != static_cast<int>(kStandardFrames))
        throw ParameterError("train: final curriculum length must be 64");
}

namespace {

TensorF make_batch(const std::vector<const LandmarkSequence*>& seqs,
                   const std::vector<size_t>& frame_idx) {
    const size_t b = seqs.size(), t = frame_idx.size();
    TensorF batch({b, t, kFeatDim});
    for (size_t bi = 0; bi < b; ++bi)
        for (size_t ti = 0; ti < t; ++ti)
            std::copy_n(seqs[bi]->frame(frame_idx[ti]), kFeatDim,
                        batch.data() + (bi * t + ti) * kFeatDim);
    return batch;
}

std::vector<size_t> identity_indices(size_t n) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

struct ValScore {
    double loss = 0.0;
    double top1 = 0.0;
    double top5 = 0.0;
};

ValScore score_validation(Classifier<float>& model, const std::vector<LandmarkSequence>& val,
                          const TrainConfig& tc) {
    const size_t n = val.size();
    const auto k = static_cast<size_t>(model.config().num_classes);
    TensorF all_logits({n, k});
    std::vector<int> truths(n);
    const std::vector<size_t> full = identity_indices(kStandardFrames);

    double loss_sum = 0.0;
    for (size_t start = 0; start < n; start += static_cast<size_t>(tc.batch_size)) {
        const size_t stop = std::min(n, start + static_cast<size_t>(tc.batch_size));
        std::vector<const LandmarkSequence*> ptrs;
        std::vector<int> targets;
        for (size_t i = start; i < stop; ++i) {
            ptrs.push_back(&val[i]);
            targets.push_back(val[i].label);
            truths[i] = val[i].label;
        }
        const TensorF logits = model.infer(make_batch(ptrs, full));
        loss_sum += label_smoothed_loss(logits, targets, tc.label_smoothing).loss *
                    static_cast<double>(stop - start);
        std::copy_n(logits.data(), logits.size(), all_logits.data() + start * k);
    }

    ValScore score;
    score.loss = loss_sum / static_cast<double>(n);
    score.top1 = top_k_accuracy(all_logits, truths, 1);
    score.top5 = top_k_accuracy(all_logits, truths, std::min<int>(5, static_cast<int>(k)));
    return score;
}

} // namespace

FitResult fit(const ModelConfig& model_config, const TrainConfig& train_config,
              const std::vector<LandmarkSequence>& train,
              const std::vector<LandmarkSequence>& val, uint64_t run_seed) {
    model_config.validate();
    train_config.validate();
    if (train.empty() || val.empty()) throw ProtocolError("fit: empty train or validation set");

    // Signer overlap between train and validation is a protocol breach.
    std::set<std::string> train_signers, val_signers;
    for (const auto& s : train) train_signers.insert(s.signer);
    for (const auto& s : val) val_signers.insert(s.signer);
    for (const auto& s : val_signers)
        if (train_signers.count(s))
            throw ProtocolError("fit: signer '" + s + "' appears in both train and validation");

    for (const auto* set : {&train, &val})
        for (const auto& s : *set) {
            if (s.num_frames() != kStandardFrames)
                throw ProtocolError("fit: sample " + s.id + " is not standardized to 64 frames");
            if (s.label < 0 || s.label >= model_config.num_classes)
                throw ProtocolError("fit: sample " + s.id + " has an out-of-range label");
        }

    const Rng root(run_seed, "train");
    Classifier<float> model = Classifier<float>::initialized(model_config, root.child("init"));
    AdamState<float> opt = AdamState<float>::for_params(model.params());

    FitResult result;
    EarlyStopState stop;

    std::vector<size_t> order(train.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
        const double lr = lr_for_epoch(epoch, train_config.cycle_epochs, train_config.lr_base,
                                       train_config.lr_max);
        const int frames = curriculum_length(epoch, train_config.curriculum_epochs,
                                             train_config.curriculum_lengths);
        const std::vector<size_t> frame_idx = curriculum_indices(frames);

        Rng shuffle_rng = root.child("shuffle/" + std::to_string(epoch));
        shuffle_rng.shuffle(order.begin(), order.end());

        // Fresh augmentation draws per sample and epoch, keyed so batch
        // composition cannot change them.
        std::vector<LandmarkSequence> augmented(train.size());
        for (size_t i = 0; i < train.size(); ++i) {
            Rng aug_rng =
                root.child("aug/" + train[i].id + "/" + std::to_string(epoch));
            augmented[i] = augment_sample(train[i], aug_rng, train_config.noise_sigma);
        }

        double loss_sum = 0.0;
        size_t batch_index = 0;
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(train_config.batch_size), ++batch_index) {
            const size_t stop =
                std::min(order.size(), start + static_cast<size_t>(train_config.batch_size));
            std::vector<const LandmarkSequence*> ptrs;
            std::vector<int> targets;
            for (size_t i = start; i < stop; ++i) {
                ptrs.push_back(&augmented[order[i]]);
                targets.push_back(augmented[order[i]].label);
            }
            Rng drop_rng = root.child("dropout/" + std::to_string(epoch) + "/" +
                                      std::to_string(batch_index));
            const TensorF logits =
                model.forward(make_batch(ptrs, frame_idx), true, drop_rng, true);
            LossResult<float> loss =
                label_smoothed_loss(logits, targets, train_config.label_smoothing);
            loss_sum += loss.loss * static_cast<double>(stop - start);

            ParamSet<float> grads = model.backward(loss.dlogits);
            clip_global_norm(grads, train_config.clip_norm);
            adamw_step(model.params(), grads, opt, lr, train_config.weight_decay);
        }

        const ValScore score = score_validation(model, val, train_config);

        EpochRow row;
        row.epoch = epoch;
        row.lr = lr;
        row.curriculum_frames = frames;
        row.train_loss = loss_sum / static_cast<double>(train.size());
        row.val_loss = score.loss;
        row.val_top1 = score.top1;
        row.val_top5 = score.top5;
        result.log.push_back(row);
        result.epochs_run = epoch + 1;

        if (stop.observe(epoch, score.loss)) result.best_params = model.params();
        if (stop.should_stop(train_config.patience)) break;
    }
    result.best_epoch = stop.best_epoch;
    result.best_val_loss = stop.best_loss;
    return result;
}

void write_epoch_log(const std::filesystem::path& path, const std::vector<EpochRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("write_epoch_log: cannot open " + path.string());
    out << "epoch,lr,curriculum_frames,train_loss,val_loss,val_top1,val_top5\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%d,%.10g,%d,%.10g,%.10g,%.10g,%.10g\n", r.epoch, r.lr,
                      r.curriculum_frames, r.train_loss, r.val_loss, r.val_top1, r.val_top5);
        out << line;
    }
}

} // namespace slr
