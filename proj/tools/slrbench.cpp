// Command-line front end: synthesize data, train cells, run the full
// cross-validation grid, evaluate checkpoints.

#include <iostream>

#include <CLI11.hpp>

#include "slrbench/commands.hpp"

namespace {

// Stable exit codes per error category so callers can branch on failures.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const slr::ParameterError*>(&e)) return 10;
    if (dynamic_cast<const slr::DimensionError*>(&e)) return 11;
    if (dynamic_cast<const slr::FormatError*>(&e)) return 12;
    if (dynamic_cast<const slr::DataError*>(&e)) return 13;
    if (dynamic_cast<const slr::ProtocolError*>(&e)) return 14;
    if (dynamic_cast<const slr::EvaluationError*>(&e)) return 15;
    return 1;
}

const char* category_for(const std::exception& e) {
    if (dynamic_cast<const slr::ParameterError*>(&e)) return "parameter";
    if (dynamic_cast<const slr::DimensionError*>(&e)) return "dimension";
    if (dynamic_cast<const slr::FormatError*>(&e)) return "format";
    if (dynamic_cast<const slr::DataError*>(&e)) return "data";
    if (dynamic_cast<const slr::ProtocolError*>(&e)) return "protocol";
    if (dynamic_cast<const slr::EvaluationError*>(&e)) return "evaluation";
    return "internal";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isolated sign language recognition benchmark"};
    app.require_subcommand(1);

    slr::SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic landmark dataset");
    synth->add_option("--classes", synth_args.classes, "Number of sign classes");
    synth->add_option("--signers", synth_args.signers, "Number of signers");
    synth->add_option("--per-class", synth_args.per_class, "Samples per class");
    synth->add_option("--seed", synth_args.seed, "Generator seed");
    synth->add_option("--out", synth_args.out, "Output directory")->required();
    synth->add_flag("--force", synth_args.force, "Overwrite a non-empty directory");

    slr::TrainArgs train_args;
    auto* train = app.add_subcommand("train", "Train one (model, fold, seed) cell");
    train->add_option("--config", train_args.config_file, "Experiment config file")->required();
    train->add_option("--model", train_args.model, "convlstm or transformer");
    train->add_option("--fold", train_args.fold, "Fold index");
    train->add_option("--seed", train_args.seed, "Run seed");

    slr::CrossvalArgs crossval_args;
    std::string models_flag = "convlstm,transformer";
    auto* crossval =
        app.add_subcommand("crossval", "Run the folds x runs x models grid and aggregate");
    crossval->add_option("--config", crossval_args.config_file, "Experiment config file")
        ->required();
    crossval->add_option("--models", models_flag, "Comma-separated model list");
    crossval->add_option("--jobs", crossval_args.jobs, "Parallel cells (0 = all cores)");

    slr::EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest");
    eval->add_option("--checkpoint", eval_args.checkpoint, "Checkpoint file")->required();
    eval->add_option("--manifest", eval_args.manifest, "Manifest JSON")->required();
    eval->add_option("--k", eval_args.k, "Additionally report top-k for this k");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            slr::cmd_synth(synth_args);
        } else if (train->parsed()) {
            slr::cmd_train(train_args);
        } else if (crossval->parsed()) {
            crossval_args.models.clear();
            std::stringstream ss(models_flag);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) crossval_args.models.push_back(item);
            slr::cmd_crossval(crossval_args);
        } else if (eval->parsed()) {
            slr::cmd_eval(eval_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: category=" << category_for(e) << ": " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
