#include "slrbench/preprocess.hpp"

#include <cmath>

#include "slrbench/dtw.hpp"
#include "slrbench/spline.hpp"

namespace slr {

LandmarkSequence wrist_center(const LandmarkSequence& seq) {
    LandmarkSequence out = seq;
    const size_t t = out.num_frames();
    for (size_t i = 0; i < t; ++i) {
        float* frame = out.frame(i);
        const float wx = frame[0], wy = frame[1], wz = frame[2];
        for (size_t l = 0; l < kLandmarks; ++l) {
            frame[3 * l + 0] -= wx;
            frame[3 * l + 1] -= wy;
            frame[3 * l + 2] -= wz;
        }
    }
    return out;
}

LandmarkSequence zscore(const LandmarkSequence& seq) {
    const size_t t = seq.num_frames();
    if (t < 2) throw ParameterError("zscore: sequence must have at least 2 frames");
    LandmarkSequence out = seq;
    for (size_t f = 0; f < kFeatDim; ++f) {
        double mean = 0.0;
        for (size_t i = 0; i < t; ++i) mean += seq.at(i, f);
        mean /= static_cast<double>(t);
        double var = 0.0;
        for (size_t i = 0; i < t; ++i) {
            const double d = seq.at(i, f) - mean;
            var += d * d;
        }
        var /= static_cast<double>(t);
        const double denom = std::sqrt(var) + 1e-8;
        for (size_t i = 0; i < t; ++i)
            out.at(i, f) = static_cast<float>((seq.at(i, f) - mean) / denom);
    }
    return out;
}

LandmarkSequence standardize_eval(const LandmarkSequence& seq) {
    return resample_cubic(zscore(wrist_center(seq)), kStandardFrames);
}

LandmarkSequence standardize_train(const LandmarkSequence& seq, const LandmarkSequence& tmpl,
                                   size_t dtw_width) {
    LandmarkSequence normalized = zscore(wrist_center(seq));
    LandmarkSequence aligned = align_to_template(normalized, tmpl, dtw_width);
    return resample_cubic(aligned, kStandardFrames);
}

} // namespace slr
