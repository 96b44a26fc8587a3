#include <doctest.h>

#include <sstream>

#include "slrbench/experiment.hpp"

using namespace slr;

TEST_CASE("defaults carry the published hyperparameters") {
    const ExperimentConfig cfg = parse_config_text("");
    CHECK(cfg.model.conv_filters == 128);
    CHECK(cfg.model.lstm_units == 256);
    CHECK(cfg.model.layers == 6);
    CHECK(cfg.model.heads == 8);
    CHECK(cfg.model.model_dim == 512);
    CHECK(cfg.model.dropout == 0.3);
    CHECK(cfg.model.positional_encoding);
    CHECK(cfg.train.epochs == 50);
    CHECK(cfg.train.batch_size == 64);
    CHECK(cfg.train.lr_base == 1e-4);
    CHECK(cfg.train.lr_max == 3e-3);
    CHECK(cfg.train.weight_decay == 1e-5);
    CHECK(cfg.train.clip_norm == 1.0);
    CHECK(cfg.train.label_smoothing == 0.1);
    CHECK(cfg.train.patience == 10);
    CHECK(cfg.train.curriculum_epochs == std::vector<int>{10, 25, 40});
    CHECK(cfg.train.curriculum_lengths == std::vector<int>{16, 32, 48, 64});
    CHECK(cfg.train.noise_sigma == 0.01);
    CHECK(cfg.train.dtw_width == 10);
    CHECK(cfg.train.seed == 42);
    CHECK(cfg.train.runs == 3);
    CHECK(cfg.train.folds == 5);
    CHECK(cfg.checked);
}

TEST_CASE("files override defaults; comments and blanks are ignored") {
    const std::string text = R"(# desk profile
data.root = out/synth

model.kind = convlstm
model.model_dim = 32
train.epochs = 30
train.curriculum_epochs = 5,12,20
run.checked = false
)";
    const ExperimentConfig cfg = parse_config_text(text);
    CHECK(cfg.data_root == "out/synth");
    CHECK(cfg.model.kind == ModelKind::convlstm);
    CHECK(cfg.model.model_dim == 32);
    CHECK(cfg.train.epochs == 30);
    CHECK(cfg.train.curriculum_epochs == std::vector<int>{5, 12, 20});
    CHECK(!cfg.checked);
    CHECK(cfg.model.lstm_units == 256); // untouched default
}

TEST_CASE("unknown keys and malformed values are hard errors") {
    CHECK_THROWS_WITH_AS(parse_config_text("model.hidden = 5\n"),
                         doctest::Contains("model.hidden"), ParameterError);
    CHECK_THROWS_AS(parse_config_text("train.epochs = fifty\n"), ParameterError);
    CHECK_THROWS_AS(parse_config_text("train.epochs: 50\n"), ParameterError);
    CHECK_THROWS_AS(parse_config_text("model.kind = mlp\n"), ParameterError);
    CHECK_THROWS_AS(parse_config_text("run.checked = yes\n"), ParameterError);
}

TEST_CASE("render/parse round trip is lossless") {
    ExperimentConfig cfg = parse_config_text("");
    cfg.data_root = "some/dir";
    cfg.model.kind = ModelKind::convlstm;
    cfg.model.num_classes = 7;
    cfg.train.lr_max = 2.5e-3;
    cfg.train.seed = 1234;

    const std::string text = render_config(cfg);
    const ExperimentConfig back = parse_config_text(text);
    CHECK(render_config(back) == text);
    CHECK(back.model.kind == ModelKind::convlstm);
    CHECK(back.model.num_classes == 7);
    CHECK(back.train.lr_max == 2.5e-3);
    CHECK(back.train.seed == 1234);
}

TEST_CASE("resolved configs for the two models differ only in model.kind") {
    ExperimentConfig a = parse_config_text("model.model_dim = 32\n");
    ExperimentConfig b = a;
    a.model.kind = ModelKind::convlstm;
    b.model.kind = ModelKind::transformer;

    std::istringstream sa(render_config(a)), sb(render_config(b));
    std::string la, lb;
    int differing = 0;
    while (std::getline(sa, la) && std::getline(sb, lb)) {
        if (la != lb) {
            ++differing;
            CHECK(la == "model.kind = convlstm");
            CHECK(lb == "model.kind = transformer");
        }
    }
    CHECK(differing == 1);
}
