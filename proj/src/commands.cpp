#include "slrbench/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "slrbench/checkpoint.hpp"
#include "slrbench/classifier.hpp"
#include "slrbench/dtw.hpp"
#include "slrbench/metrics.hpp"
#include "slrbench/preprocess.hpp"
#include "slrbench/spline.hpp"
#include "slrbench/synth.hpp"

namespace slr {

namespace fs = std::filesystem;

void cmd_synth(const SynthArgs& args) {
    if (args.out.empty()) throw ParameterError("synth: --out is required");
    const fs::path out(args.out);
    if (fs::exists(out) && !fs::is_empty(out) && !args.force)
        throw ProtocolError("synth: " + out.string() +
                            " exists and is not empty (use --force to overwrite)");
    const SynthDataset ds =
        synth_generate(args.classes, args.signers, args.per_class, Rng(args.seed, "synth"));
    write_dataset(out, ds);
    std::cout << "wrote " << ds.sequences.size() << " samples ("
              << args.classes << " classes, " << args.signers << " signers) to "
              << out.string() << "\n";
}

FoldPlan plan_for_config(const DatasetManifest& manifest, const ExperimentConfig& config) {
    return signer_independent_folds(manifest, config.train.folds,
                                    Rng(config.train.seed, "foldplan"));
}

FoldData prepare_fold(const DatasetManifest& manifest, const FoldPlan& plan, int fold,
                      size_t dtw_width) {
    if (fold < 0 || static_cast<size_t>(fold) >= plan.folds.size())
        throw ParameterError("fold " + std::to_string(fold) + " outside the plan");
    const FoldSplit& split = plan.folds[static_cast<size_t>(fold)];

    auto load_normalized = [&](const std::vector<std::string>& ids) {
        std::vector<LandmarkSequence> out;
        out.reserve(ids.size());
        for (const auto& id : ids)
            out.push_back(zscore(wrist_center(load_sequence(manifest, manifest.find(id)))));
        return out;
    };

    const std::vector<LandmarkSequence> train_norm = load_normalized(split.train_ids);
    const std::vector<LandmarkSequence> val_norm = load_normalized(split.val_ids);
    const std::vector<LandmarkSequence> test_norm = load_normalized(split.test_ids);

    // Class medoids over the training split only; training samples are
    // aligned to their class medoid, validation and test are not.
    std::map<int, std::vector<LandmarkSequence>> by_label;
    for (const auto& s : train_norm) by_label[s.label].push_back(s);
    std::map<int, LandmarkSequence> medoids;
    for (const auto& [label, members] : by_label)
        medoids.emplace(label, class_medoid(members, dtw_width));

    FoldData data;
    for (const auto& s : train_norm)
        data.train.push_back(
            resample_cubic(align_to_template(s, medoids.at(s.label), dtw_width)));
    for (const auto& s : val_norm) data.val.push_back(resample_cubic(s));
    for (const auto& s : test_norm) data.test.push_back(resample_cubic(s));
    return data;
}

fs::path cell_dir(const ExperimentConfig& config, const std::string& model, int fold,
                  uint64_t seed) {
    return fs::path(config.out_dir) / model / std::to_string(fold) / std::to_string(seed);
}

namespace {

ExperimentConfig load_config(const std::string& file) {
    if (file.empty()) throw ParameterError("--config is required");
    return parse_config_file(file);
}

DatasetManifest manifest_for(const ExperimentConfig& config) {
    if (config.data_root.empty()) throw ParameterError("config: data.root is not set");
    const fs::path manifest_path = fs::path(config.data_root) / "manifest.json";
    if (!fs::exists(manifest_path))
        throw DataError("dataset manifest not found at " + manifest_path.string());
    return load_manifest(manifest_path);
}

void resolve_classes(ExperimentConfig& config, const DatasetManifest& manifest) {
    if (config.model.num_classes == 0) config.model.num_classes = manifest.num_classes;
    if (config.model.num_classes != manifest.num_classes)
        throw ProtocolError("config: model.num_classes " +
                            std::to_string(config.model.num_classes) +
                            " does not match the manifest's " +
                            std::to_string(manifest.num_classes));
}

void write_test_manifest(const fs::path& cell, const DatasetManifest& manifest,
                         const std::vector<std::string>& test_ids) {
    DatasetManifest sub;
    sub.num_classes = manifest.num_classes;
    for (const auto& id : test_ids) {
        SampleInfo info = manifest.find(id);
        const fs::path absolute = fs::absolute(manifest.root / info.file);
        info.file = fs::proximate(absolute, fs::absolute(cell)).generic_string();
        sub.samples.push_back(std::move(info));
        sub.signers.insert(sub.samples.back().signer);
    }
    save_manifest(cell / "test_manifest.json", sub);
}

CellResult run_cell(const ExperimentConfig& config, const DatasetManifest& manifest,
                    const FoldPlan& plan, const FoldData& data, const std::string& model_name,
                    int fold, uint64_t seed) {
    ExperimentConfig resolved = config;
    resolved.model.kind = model_kind_from_string(model_name);

    const fs::path cell = cell_dir(resolved, model_name, fold, seed);
    fs::create_directories(cell);
    write_resolved_config(cell / "config.resolved.cfg", resolved);

    const FitResult fit_result =
        fit(resolved.model, resolved.train, data.train, data.val, seed);
    write_epoch_log(cell / "log.csv", fit_result.log);
    save_checkpoint(cell / "checkpoint.slck", resolved.model, fit_result.best_params);
    write_test_manifest(cell, manifest, plan.folds[static_cast<size_t>(fold)].test_ids);
    const size_t param_count = fit_result.best_params.total_values();

    const EvalMetrics metrics = evaluate_model(resolved.model, fit_result.best_params,
                                               data.test, resolved.train.batch_size);

    nlohmann::json result;
    result["model"] = model_name;
    result["fold"] = fold;
    result["seed"] = seed;
    result["top1"] = metrics.top1;
    result["top5"] = metrics.top5;
    result["best_epoch"] = fit_result.best_epoch;
    result["best_val_loss"] = fit_result.best_val_loss;
    result["epochs_run"] = fit_result.epochs_run;
    result["param_count"] = param_count;
    std::ofstream out(cell / "result.json", std::ios::trunc);
    out << result.dump(2) << "\n";

    CellResult cr;
    cr.model = model_name;
    cr.fold = fold;
    cr.seed = seed;
    cr.top1 = metrics.top1;
    cr.top5 = metrics.top5;
    return cr;
}

bool load_cell_result(const fs::path& cell, CellResult& out) {
    const fs::path result_path = cell / "result.json";
    if (!fs::exists(result_path) || !fs::exists(cell / "checkpoint.slck")) return false;
    std::ifstream in(result_path);
    nlohmann::json doc;
    try {
        in >> doc;
        out.model = doc.at("model").get<std::string>();
        out.fold = doc.at("fold").get<int>();
        out.seed = doc.at("seed").get<uint64_t>();
        out.top1 = doc.at("top1").get<double>();
        out.top5 = doc.at("top5").get<double>();
    } catch (const nlohmann::json::exception&) {
        return false; // treat a corrupt cell as incomplete
    }
    return true;
}

} // namespace

CellResult cmd_train(const TrainArgs& args) {
    ExperimentConfig config = load_config(args.config_file);
    if (!args.model.empty()) config.model.kind = model_kind_from_string(args.model);
    set_checked_mode(config.checked);

    const DatasetManifest manifest = manifest_for(config);
    resolve_classes(config, manifest);
    config.model.validate();
    config.train.validate();

    const FoldPlan plan = plan_for_config(manifest, config);
    const FoldData data = prepare_fold(manifest, plan, args.fold, config.train.dtw_width);

    const std::string model_name = to_string(config.model.kind);
    size_t param_count = 0;
    for (const auto& entry : shape_manifest(config.model)) {
        size_t n = 1;
        for (const size_t e : entry.shape) n *= e;
        param_count += n;
    }
    std::cout << model_name << " parameters: " << param_count << "\n";
    const CellResult result =
        run_cell(config, manifest, plan, data, model_name, args.fold, args.seed);
    std::cout << model_name << " fold " << args.fold << " seed " << args.seed
              << ": top1=" << result.top1 << " top5=" << result.top5 << "\n";
    return result;
}

std::vector<RunReport> cmd_crossval(const CrossvalArgs& args) {
    ExperimentConfig config = load_config(args.config_file);
    set_checked_mode(config.checked);
    if (args.models.empty()) throw ParameterError("crossval: no models requested");

    const DatasetManifest manifest = manifest_for(config);
    resolve_classes(config, manifest);
    config.model.validate();
    config.train.validate();

    const FoldPlan plan = plan_for_config(manifest, config);
    fs::create_directories(config.out_dir);
    write_resolved_config(fs::path(config.out_dir) / "config.resolved.cfg", config);

    struct Cell {
        std::string model;
        int fold;
        uint64_t seed;
    };
    std::vector<Cell> todo;
    std::vector<CellResult> done;
    for (const auto& model : args.models) {
        model_kind_from_string(model); // validate the name early
        for (int fold = 0; fold < config.train.folds; ++fold) {
            for (int run = 0; run < config.train.runs; ++run) {
                const uint64_t seed = config.train.seed + static_cast<uint64_t>(run);
                CellResult existing;
                if (load_cell_result(cell_dir(config, model, fold, seed), existing)) {
                    done.push_back(existing); // resume: keep completed cells
                } else {
                    todo.push_back({model, fold, seed});
                }
            }
        }
    }

    // Fold preprocessing is shared by every cell of that fold.
    std::map<int, FoldData> folds;
    for (const auto& cell : todo)
        if (!folds.count(cell.fold))
            folds.emplace(cell.fold,
                          prepare_fold(manifest, plan, cell.fold, config.train.dtw_width));

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t jobs = std::max<size_t>(
        1, std::min<size_t>(args.jobs > 0 ? static_cast<size_t>(args.jobs) : hw, todo.size()));

    std::mutex mu;
    std::atomic<size_t> next{0};
    std::vector<std::string> failures;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const Cell& cell = todo[i];
            try {
                const CellResult r = run_cell(config, manifest, plan, folds.at(cell.fold),
                                              cell.model, cell.fold, cell.seed);
                std::lock_guard<std::mutex> lock(mu);
                done.push_back(r);
                std::cout << "cell " << cell.model << "/" << cell.fold << "/" << cell.seed
                          << " top1=" << r.top1 << " top5=" << r.top5 << "\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                failures.push_back(cell.model + "/" + std::to_string(cell.fold) + "/" +
                                   std::to_string(cell.seed) + ": " + e.what());
            }
        }
    };
    if (jobs <= 1 || todo.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    if (!failures.empty()) {
        std::string msg = "crossval: grid incomplete, aggregate refused:";
        for (const auto& f : failures) msg += "\n  " + f;
        throw ProtocolError(msg);
    }

    std::vector<RunReport> reports;
    for (const auto& model : args.models)
        reports.push_back(aggregate(model, config.dataset_name, done, config.train.folds,
                                    config.train.runs));
    write_results_csv(fs::path(config.out_dir) / "results.csv", reports);
    write_markdown_table(fs::path(config.out_dir) / "comparison.md", reports);

    for (const auto& r : reports)
        std::cout << r.model << ": top1 " << r.top1_mean << " +/- " << r.top1_std << ", top5 "
                  << r.top5_mean << " +/- " << r.top5_std << "\n";
    return reports;
}

EvalOutput cmd_eval(const EvalArgs& args) {
    if (args.checkpoint.empty() || args.manifest.empty())
        throw ParameterError("eval: --checkpoint and --manifest are required");

    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const DatasetManifest manifest = load_manifest(args.manifest);
    if (manifest.num_classes != ckpt.config.num_classes)
        throw FormatError("eval: manifest has " + std::to_string(manifest.num_classes) +
                          " classes, checkpoint expects " +
                          std::to_string(ckpt.config.num_classes));

    std::vector<LandmarkSequence> samples;
    samples.reserve(manifest.samples.size());
    for (const auto& info : manifest.samples)
        samples.push_back(standardize_eval(load_sequence(manifest, info)));

    EvalOutput out;
    out.samples = samples.size();
    out.metrics = evaluate_model(ckpt.config, ckpt.params, samples);
    if (args.k > 0) {
        // Reuse the batched forward; k is validated inside top_k_accuracy.
        Classifier<float> model(ckpt.config, ckpt.params);
        const size_t n = samples.size();
        const auto k_classes = static_cast<size_t>(ckpt.config.num_classes);
        TensorF logits({n, k_classes});
        std::vector<int> truths(n);
        for (size_t i = 0; i < n; ++i) {
            TensorF batch({1, kStandardFrames, kFeatDim});
            std::copy_n(samples[i].frames.data(), samples[i].frames.size(), batch.data());
            const TensorF row = model.infer(batch);
            std::copy_n(row.data(), k_classes, logits.data() + i * k_classes);
            truths[i] = samples[i].label;
        }
        out.top_k = top_k_accuracy(logits, truths, args.k);
    }

    const fs::path csv = fs::path(args.checkpoint).parent_path() / "eval.csv";
    std::ofstream file(csv, std::ios::trunc);
    file << "checkpoint,manifest,samples,top1,top5\n";
    char line[512];
    std::snprintf(line, sizeof line, "%s,%s,%zu,%.10g,%.10g\n", args.checkpoint.c_str(),
                  args.manifest.c_str(), out.samples, out.metrics.top1, out.metrics.top5);
    file << line;

    std::cout << "top1=" << out.metrics.top1 << " top5=" << out.metrics.top5;
    if (args.k > 0) std::cout << " top" << args.k << "=" << out.top_k;
    std::cout << " (" << out.samples << " samples)\n";
    return out;
}

} // namespace slr
