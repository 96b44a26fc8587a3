#include <doctest.h>

#include <cstring>

#include "slrbench/preprocess.hpp"
#include "slrbench/rng.hpp"

using namespace slr;

namespace {

LandmarkSequence random_sequence(size_t frames, uint64_t seed) {
    LandmarkSequence seq;
    seq.frames.resize(frames * kFeatDim);
    Rng rng(seed, "prep-test");
    for (auto& v : seq.frames) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    return seq;
}

} // namespace

TEST_CASE("wrist_center zeroes landmark 0 and is idempotent") {
    const LandmarkSequence seq = random_sequence(12, 1);
    const LandmarkSequence centered = wrist_center(seq);
    CHECK(centered.num_frames() == 12);
    for (size_t t = 0; t < 12; ++t) {
        CHECK(centered.at(t, 0) == 0.0f);
        CHECK(centered.at(t, 1) == 0.0f);
        CHECK(centered.at(t, 2) == 0.0f);
    }

    const LandmarkSequence twice = wrist_center(centered);
    CHECK(std::memcmp(twice.frames.data(), centered.frames.data(),
                      centered.frames.size() * sizeof(float)) == 0);
}

TEST_CASE("wrist_center is invariant to per-frame translation") {
    const LandmarkSequence seq = random_sequence(6, 2);
    LandmarkSequence shifted = seq;
    for (size_t l = 0; l < kLandmarks; ++l) {
        shifted.at(2, 3 * l + 0) += 5.0f;
        shifted.at(2, 3 * l + 1) += 5.0f;
        shifted.at(2, 3 * l + 2) += 5.0f;
    }
    const LandmarkSequence a = wrist_center(seq);
    const LandmarkSequence b = wrist_center(shifted);
    for (size_t i = 0; i < a.frames.size(); ++i)
        CHECK(std::abs(a.frames[i] - b.frames[i]) <= 1e-6);
}

TEST_CASE("zscore: column statistics, constant guard, two-point column") {
    const LandmarkSequence seq = random_sequence(40, 3);
    const LandmarkSequence out = zscore(seq);
    for (size_t f = 0; f < kFeatDim; ++f) {
        double mean = 0.0;
        for (size_t t = 0; t < 40; ++t) mean += out.at(t, f);
        mean /= 40.0;
        double var = 0.0;
        for (size_t t = 0; t < 40; ++t) var += (out.at(t, f) - mean) * (out.at(t, f) - mean);
        const double stddev = std::sqrt(var / 40.0);
        CHECK(std::abs(mean) <= 1e-6);
        CHECK(stddev <= 1.0 + 1e-6);
        CHECK(stddev >= 1.0 - 1e-3);
    }

    SUBCASE("constant column stays finite and zero") {
        LandmarkSequence flat = seq;
        for (size_t t = 0; t < 40; ++t) flat.at(t, 5) = 2.5f;
        const LandmarkSequence z = zscore(flat);
        for (size_t t = 0; t < 40; ++t) CHECK(z.at(t, 5) == 0.0f);
    }

    SUBCASE("column [0, 2] maps near [-1, 1] shrunk by epsilon") {
        LandmarkSequence two;
        two.frames.assign(2 * kFeatDim, 0.0f);
        two.at(0, 7) = 0.0f;
        two.at(1, 7) = 2.0f;
        const LandmarkSequence z = zscore(two);
        // mean 1, population std 1: exact values are +/-(1 - delta) with
        // delta = 1 - 1/(1+1e-8), below float32 resolution.
        const double want = 1.0 / (1.0 + 1e-8);
        CHECK(std::abs(z.at(0, 7) - (-want)) <= 1e-6);
        CHECK(std::abs(z.at(1, 7) - want) <= 1e-6);
        CHECK(std::abs(z.at(0, 7)) <= 1.0f);
        CHECK(std::abs(z.at(1, 7)) <= 1.0f);
    }
}

TEST_CASE("zscore preserves an exactly-zero wrist column") {
    const LandmarkSequence seq = wrist_center(random_sequence(20, 4));
    const LandmarkSequence z = zscore(seq);
    for (size_t t = 0; t < 20; ++t) {
        CHECK(z.at(t, 0) == 0.0f);
        CHECK(z.at(t, 1) == 0.0f);
        CHECK(z.at(t, 2) == 0.0f);
    }
}

TEST_CASE("standardize_eval emits 64 x 63 with metadata intact") {
    LandmarkSequence seq = random_sequence(47, 5);
    seq.id = "sample";
    seq.label = 3;
    seq.signer = "sig";
    const LandmarkSequence out = standardize_eval(seq);
    CHECK(out.num_frames() == kStandardFrames);
    CHECK(out.id == "sample");
    CHECK(out.label == 3);
    CHECK(out.signer == "sig");
}
