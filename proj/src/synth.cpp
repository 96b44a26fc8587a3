#include "slrbench/synth.hpp"

#include <cmath>
#include <cstdio>

namespace slr {

namespace {

struct ClassShape {
    double omega = 1.0;            // fundamental frequency, cycles per clip
    double harmonic = 0.0;         // second-harmonic weight
    double amp[kFeatDim] = {};     // per-coordinate oscillation amplitude
    double phase[kFeatDim] = {};   // per-coordinate phase
    double phase2[kFeatDim] = {};  // second-harmonic phase
};

struct SignerStyle {
    double scale = 1.0;            // spatial scale on relative motion
    double offset[3] = {};         // global translation (removed by centering)
    double warp = 1.0;             // time warp exponent, t -> t^warp
    double pose[kFeatDim] = {};    // static per-landmark shift
};

ClassShape make_class(int c, const Rng& base) {
    Rng rng = base.child("class/" + std::to_string(c));
    ClassShape shape;
    // Spread fundamentals so classes stay apart after z-scoring, which
    // keeps only the shape of each feature column.
    shape.omega = 0.8 + 0.5 * c;
    shape.harmonic = rng.uniform(0.1, 0.5);
    for (size_t f = 3; f < kFeatDim; ++f) { // landmark 0 carries no relative motion
        shape.amp[f] = rng.uniform(0.4, 1.6) * 0.08;
        shape.phase[f] = rng.uniform(0.0, 2.0 * M_PI);
        shape.phase2[f] = rng.uniform(0.0, 2.0 * M_PI);
    }
    return shape;
}

SignerStyle make_signer(int s, const Rng& base) {
    Rng rng = base.child("signer/" + std::to_string(s));
    SignerStyle style;
    style.scale = rng.uniform(0.85, 1.15);
    for (int d = 0; d < 3; ++d) style.offset[d] = rng.uniform(-0.05, 0.05);
    style.warp = rng.uniform(0.85, 1.18);
    for (size_t f = 3; f < kFeatDim; ++f) style.pose[f] = rng.uniform(-0.01, 0.01);
    return style;
}

std::string two_digits(int v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d", v);
    return buf;
}

} // namespace

SynthDataset synth_generate(int classes, int signers, int samples_per_class, const Rng& rng) {
    if (classes < 1 || signers < 1 || samples_per_class < 1)
        throw ParameterError("synth_generate: all counts must be at least 1");

    std::vector<ClassShape> shapes;
    for (int c = 0; c < classes; ++c) shapes.push_back(make_class(c, rng));
    std::vector<SignerStyle> styles;
    for (int s = 0; s < signers; ++s) styles.push_back(make_signer(s, rng));

    SynthDataset ds;
    ds.manifest.num_classes = classes;

    for (int c = 0; c < classes; ++c) {
        const ClassShape& shape = shapes[c];
        for (int k = 0; k < samples_per_class; ++k) {
            const int s = k % signers;
            const SignerStyle& style = styles[s];

            char idbuf[40];
            std::snprintf(idbuf, sizeof idbuf, "c%02d_s%02d_%04d", c, s, k);
            const std::string id = idbuf;

            Rng sample_rng = rng.child("sample/" + id);
            const size_t t = 40 + sample_rng.below(51); // native length in [40, 90]
            const double phase_jitter = sample_rng.uniform(-0.2, 0.2);
            const double amp_jitter = sample_rng.uniform(0.95, 1.05);

            LandmarkSequence seq;
            seq.id = id;
            seq.label = c;
            seq.signer = "signer" + two_digits(s);
            seq.frames.resize(t * kFeatDim);

            for (size_t i = 0; i < t; ++i) {
                const double tn = static_cast<double>(i) / static_cast<double>(t - 1);
                const double tw = std::pow(tn, style.warp);
                // Whole-hand sweep; identical for every landmark, so it
                // vanishes under wrist centering.
                const double sweep[3] = {
                    0.5 + style.offset[0] + 0.15 * std::sin(M_PI * tw),
                    0.5 + style.offset[1] + 0.10 * tw,
                    0.3 + style.offset[2] + 0.05 * std::cos(M_PI * tw)};
                for (size_t f = 0; f < kFeatDim; ++f) {
                    const double arg = 2.0 * M_PI * shape.omega * tw;
                    const double rel =
                        shape.amp[f] * amp_jitter *
                            std::sin(arg + shape.phase[f] + phase_jitter) +
                        shape.amp[f] * shape.harmonic *
                            std::sin(2.0 * arg + shape.phase2[f]);
                    const double value = sweep[f % 3] + style.pose[f] + style.scale * rel +
                                         0.01 * sample_rng.normal();
                    seq.frames[i * kFeatDim + f] = static_cast<float>(value);
                }
            }

            SampleInfo info;
            info.id = id;
            info.label = c;
            info.signer = seq.signer;
            info.file = "samples/" + id + ".slrb";
            info.num_frames = t;
            ds.manifest.samples.push_back(info);
            ds.manifest.signers.insert(seq.signer);
            ds.sequences.push_back(std::move(seq));
        }
    }
    return ds;
}

void write_dataset(const std::filesystem::path& dir, const SynthDataset& dataset) {
    std::filesystem::create_directories(dir / "samples");
    for (size_t i = 0; i < dataset.sequences.size(); ++i)
        save_slrb(dir / dataset.manifest.samples[i].file, dataset.sequences[i]);
    save_manifest(dir / "manifest.json", dataset.manifest);
}

} // namespace slr
