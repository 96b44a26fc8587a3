#include <doctest.h>

#include <cstring>
#include <fstream>

#include "slrbench/checkpoint.hpp"

using namespace slr;
namespace fs = std::filesystem;

namespace {

ModelConfig small_config() {
    ModelConfig cfg;
    cfg.kind = ModelKind::transformer;
    cfg.num_classes = 4;
    cfg.layers = 1;
    cfg.heads = 2;
    cfg.model_dim = 8;
    cfg.ffn_dim = 16;
    return cfg;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "slrbench_test_checkpoint";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("checkpoint round trip preserves config and parameters bitwise") {
    const fs::path dir = work_dir();
    const ModelConfig cfg = small_config();
    const ParamSet<float> params = init_params<float>(cfg, Rng(3, "ckpt"));
    save_checkpoint(dir / "model.slck", cfg, params);

    const Checkpoint back = load_checkpoint(dir / "model.slck");
    CHECK(back.config == cfg);
    REQUIRE(back.params.count() == params.count());
    for (size_t i = 0; i < params.count(); ++i) {
        CHECK(back.params.name(i) == params.name(i));
        CHECK(std::memcmp(back.params.tensor(i).data(), params.tensor(i).data(),
                          params.tensor(i).size() * sizeof(float)) == 0);
    }

    // Re-saving yields identical bytes.
    save_checkpoint(dir / "model2.slck", back.config, back.params);
    std::ifstream a(dir / "model.slck", std::ios::binary), b(dir / "model2.slck",
                                                             std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)),
                              std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)),
                              std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("corrupted checkpoints are refused before any payload parsing") {
    const fs::path dir = work_dir();
    const ModelConfig cfg = small_config();
    save_checkpoint(dir / "model.slck", cfg, init_params<float>(cfg, Rng(4, "ckpt")));

    std::ifstream in(dir / "model.slck", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    SUBCASE("flipped payload byte breaks the checksum") {
        bytes[bytes.size() / 2] ^= 0x5A;
        std::ofstream out(dir / "bad.slck", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        CHECK_THROWS_WITH_AS(load_checkpoint(dir / "bad.slck"),
                             doctest::Contains("checksum"), FormatError);
    }
    SUBCASE("truncation is detected") {
        std::ofstream out(dir / "short.slck", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 9));
        out.close();
        CHECK_THROWS_AS(load_checkpoint(dir / "short.slck"), FormatError);
    }
    SUBCASE("wrong magic") {
        bytes[1] = 'x';
        std::ofstream out(dir / "magic.slck", std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.close();
        CHECK_THROWS_AS(load_checkpoint(dir / "magic.slck"), FormatError);
    }
}

TEST_CASE("saving parameters that disagree with the config is refused") {
    const fs::path dir = work_dir();
    const ModelConfig cfg = small_config();
    ModelConfig other = cfg;
    other.model_dim = 16;
    const ParamSet<float> wrong = init_params<float>(other, Rng(5, "ckpt"));
    CHECK_THROWS_AS(save_checkpoint(dir / "bad.slck", cfg, wrong), FormatError);
}

TEST_CASE("crc32 matches the standard test vector") {
    const char* data = "123456789";
    CHECK(crc32(data, 9) == 0xCBF43926u);
}
