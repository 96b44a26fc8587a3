#include "slrbench/augment.hpp"

#include <cmath>

#include "slrbench/spline.hpp"

namespace slr {

LandmarkSequence temporal_jitter(const LandmarkSequence& seq, double speed) {
    const size_t t = seq.num_frames();
    if (t != kStandardFrames)
        throw ParameterError("temporal_jitter: sequence must be standardized to 64 frames");
    if (speed == 1.0) return seq;

    LandmarkSequence out = seq;
    std::vector<double> column(t);
    for (size_t f = 0; f < kFeatDim; ++f) {
        for (size_t i = 0; i < t; ++i) column[i] = seq.at(i, f);
        const CubicSpline spline(column);
        for (size_t j = 0; j < t; ++j) {
            const double tj = speed * static_cast<double>(j) / static_cast<double>(t - 1);
            out.at(j, f) = static_cast<float>(spline(tj));
        }
    }
    return out;
}

LandmarkSequence rotate_xy(const LandmarkSequence& seq, double angle) {
    if (angle == 0.0) return seq;
    const auto c = static_cast<float>(std::cos(angle));
    const auto s = static_cast<float>(std::sin(angle));
    LandmarkSequence out = seq;
    const size_t t = out.num_frames();
    for (size_t i = 0; i < t; ++i) {
        float* frame = out.frame(i);
        for (size_t l = 0; l < kLandmarks; ++l) {
            const float x = frame[3 * l + 0];
            const float y = frame[3 * l + 1];
            frame[3 * l + 0] = c * x - s * y;
            frame[3 * l + 1] = s * x + c * y;
        }
    }
    return out;
}

LandmarkSequence add_noise(const LandmarkSequence& seq, Rng& rng, double sigma) {
    if (sigma < 0.0) throw ParameterError("add_noise: sigma must be non-negative");
    if (sigma == 0.0) return seq;
    LandmarkSequence out = seq;
    for (auto& v : out.frames) v = static_cast<float>(v + sigma * rng.normal());
    return out;
}

LandmarkSequence augment_temporal_jitter(const LandmarkSequence& seq, Rng& rng) {
    return temporal_jitter(seq, rng.uniform(0.95, 1.05));
}

LandmarkSequence augment_rotate(const LandmarkSequence& seq, Rng& rng) {
    const double limit = 15.0 * M_PI / 180.0;
    return rotate_xy(seq, rng.uniform(-limit, limit));
}

LandmarkSequence augment_sample(const LandmarkSequence& seq, Rng& rng, double noise_sigma) {
    LandmarkSequence out = augment_temporal_jitter(seq, rng);
    out = augment_rotate(out, rng);
    return add_noise(out, rng, noise_sigma);
}

} // namespace slr
