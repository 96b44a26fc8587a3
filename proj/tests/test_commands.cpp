#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "slrbench/checkpoint.hpp"
#include "slrbench/commands.hpp"

using namespace slr;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slrbench_cmd_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Tiny end-to-end profile: 3 classes, 5 signers, short training.
void write_tiny_config(const fs::path& path, const fs::path& data_root,
                       const fs::path& out_dir, int epochs = 3) {
    std::ofstream out(path);
    out << "data.root = " << data_root.string() << "\n"
        << "data.name = tiny\n"
        << "out.dir = " << out_dir.string() << "\n"
        << "model.conv_filters = 4\n"
        << "model.lstm_units = 12\n"
        << "model.layers = 1\n"
        << "model.heads = 4\n"
        << "model.model_dim = 32\n"
        << "model.ffn_dim = 32\n"
        << "model.dropout = 0.1\n"
        << "train.epochs = " << epochs << "\n"
        << "train.batch_size = 16\n"
        << "train.curriculum_epochs = 2,4,6\n"
        << "train.runs = 2\n";
}

struct TinyWorld {
    fs::path root;
    fs::path data;
    fs::path out;
    fs::path config;
};

TinyWorld make_world(const std::string& name, int per_class = 5, int epochs = 3) {
    TinyWorld w;
    w.root = fresh_dir(name);
    w.data = w.root / "data";
    w.out = w.root / "out";
    w.config = w.root / "exp.cfg";

    SynthArgs synth;
    synth.classes = 3;
    synth.signers = 5;
    synth.per_class = per_class;
    synth.seed = 42;
    synth.out = w.data.string();
    cmd_synth(synth);
    write_tiny_config(w.config, w.data, w.out, epochs);
    return w;
}

} // namespace

TEST_CASE("cmd_synth writes the expected file census and is seed-stable") {
    const fs::path dir = fresh_dir("synth");
    SynthArgs args;
    args.classes = 5;
    args.signers = 6;
    args.per_class = 40;
    args.seed = 42;
    args.out = (dir / "ds").string();
    cmd_synth(args);

    size_t slrb_files = 0;
    for (const auto& entry : fs::directory_iterator(dir / "ds" / "samples"))
        if (entry.path().extension() == ".slrb") ++slrb_files;
    CHECK(slrb_files == 200);
    CHECK(fs::exists(dir / "ds" / "manifest.json"));

    SUBCASE("refuses to overwrite a non-empty directory without --force") {
        CHECK_THROWS_AS(cmd_synth(args), ProtocolError);
        args.force = true;
        cmd_synth(args); // now allowed
    }

    SUBCASE("same seed reproduces files byte for byte") {
        SynthArgs again = args;
        again.out = (dir / "ds2").string();
        cmd_synth(again);
        CHECK(read_bytes(dir / "ds" / "manifest.json") ==
              read_bytes(dir / "ds2" / "manifest.json"));
        CHECK(read_bytes(dir / "ds" / "samples" / "c00_s00_0000.slrb") ==
              read_bytes(dir / "ds2" / "samples" / "c00_s00_0000.slrb"));
    }
}

TEST_CASE("cmd_train writes a complete, reproducible cell") {
    const TinyWorld w = make_world("train");

    TrainArgs train;
    train.config_file = w.config.string();
    train.model = "transformer";
    train.fold = 0;
    train.seed = 42;
    const CellResult first = cmd_train(train);

    const fs::path cell = w.out / "transformer" / "0" / "42";
    for (const char* name :
         {"checkpoint.slck", "log.csv", "result.json", "test_manifest.json",
          "config.resolved.cfg"})
        CHECK(fs::exists(cell / name));

    const std::string log_bytes = read_bytes(cell / "log.csv");
    const std::string ckpt_bytes = read_bytes(cell / "checkpoint.slck");

    // Identical flags reproduce identical artifacts.
    const CellResult second = cmd_train(train);
    CHECK(second.top1 == first.top1);
    CHECK(read_bytes(cell / "log.csv") == log_bytes);
    CHECK(read_bytes(cell / "checkpoint.slck") == ckpt_bytes);

    // The log has a header plus one row per epoch.
    const size_t rows = static_cast<size_t>(
        std::count(log_bytes.begin(), log_bytes.end(), '\n'));
    CHECK(rows >= 2);
    CHECK(log_bytes.rfind("epoch,lr,curriculum_frames,train_loss,val_loss,val_top1,val_top5",
                          0) == 0);
}

TEST_CASE("cmd_eval on the cell's own test manifest reproduces the logged metrics") {
    const TinyWorld w = make_world("eval");

    TrainArgs train;
    train.config_file = w.config.string();
    train.model = "convlstm";
    train.fold = 1;
    train.seed = 42;
    const CellResult trained = cmd_train(train);

    const fs::path cell = w.out / "convlstm" / "1" / "42";
    EvalArgs eval;
    eval.checkpoint = (cell / "checkpoint.slck").string();
    eval.manifest = (cell / "test_manifest.json").string();
    const EvalOutput out = cmd_eval(eval);
    CHECK(out.metrics.top1 == trained.top1);
    CHECK(out.metrics.top5 == trained.top5);
    CHECK(fs::exists(cell / "eval.csv"));

    SUBCASE("--k reporting is monotone") {
        EvalArgs with_k = eval;
        with_k.k = 1;
        const double top1_again = cmd_eval(with_k).top_k;
        with_k.k = 3;
        const double top3 = cmd_eval(with_k).top_k;
        CHECK(top3 >= top1_again);
    }

    SUBCASE("a corrupted checkpoint is refused before any computation") {
        std::string bytes = read_bytes(cell / "checkpoint.slck");
        bytes[bytes.size() / 2] ^= 0x11;
        std::ofstream bad(cell / "tampered.slck", std::ios::binary);
        bad.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        bad.close();
        EvalArgs tampered = eval;
        tampered.checkpoint = (cell / "tampered.slck").string();
        CHECK_THROWS_AS(cmd_eval(tampered), FormatError);
    }
}

TEST_CASE("cmd_train fails cleanly when the dataset is missing") {
    const fs::path dir = fresh_dir("missing");
    const fs::path cfg = dir / "exp.cfg";
    write_tiny_config(cfg, dir / "nowhere", dir / "out");

    TrainArgs train;
    train.config_file = cfg.string();
    train.model = "transformer";
    CHECK_THROWS_WITH_AS(cmd_train(train), doctest::Contains("manifest"), DataError);
}

TEST_CASE("crossval refuses a dataset with fewer signers than folds") {
    const fs::path dir = fresh_dir("fewsigners");
    SynthArgs synth;
    synth.classes = 2;
    synth.signers = 4; // folds default to 5
    synth.per_class = 5;
    synth.out = (dir / "data").string();
    cmd_synth(synth);
    write_tiny_config(dir / "exp.cfg", dir / "data", dir / "out");

    CrossvalArgs cv;
    cv.config_file = (dir / "exp.cfg").string();
    cv.models = {"transformer"};
    CHECK_THROWS_AS(cmd_crossval(cv), ProtocolError);
}

TEST_CASE("crossval runs a small grid, is resumable, and aggregates") {
    const TinyWorld w = make_world("grid", 5, 2);

    CrossvalArgs cv;
    cv.config_file = w.config.string();
    cv.models = {"transformer"};
    cv.jobs = 2;
    const std::vector<RunReport> reports = cmd_crossval(cv);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].cells.size() == 5 * 2); // folds x runs
    CHECK(reports[0].top5_mean >= reports[0].top1_mean);
    CHECK(fs::exists(w.out / "results.csv"));
    CHECK(fs::exists(w.out / "comparison.md"));

    // Resume: completed cells are not recomputed (checkpoints untouched).
    const fs::path probe = w.out / "transformer" / "2" / "43" / "checkpoint.slck";
    const auto stamp_before = fs::last_write_time(probe);
    const std::vector<RunReport> again = cmd_crossval(cv);
    CHECK(fs::last_write_time(probe) == stamp_before);
    CHECK(again[0].top1_mean == reports[0].top1_mean);

    // 1 model x 5 folds x 2 seeds -> exactly 10 result rows + 2 aggregates.
    const std::string csv = read_bytes(w.out / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 10 + 2);
}
