#include "slrbench/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frame_distance(const float* x, const float* y, size_t dim) {
    double acc = 0.0;
    for (size_t f = 0; f < dim; ++f) {
        const double d = static_cast<double>(x[f]) - static_cast<double>(y[f]);
        acc += d * d;
    }
    return std::sqrt(acc);
}

} // namespace

bool dtw_band_allows(size_t n, size_t m, size_t width, size_t i, size_t j) {
    const auto ni = static_cast<long long>(n), mi = static_cast<long long>(m);
    const long long w_eff = std::max<long long>(static_cast<long long>(width),
                                                std::llabs(ni - mi));
    // Deviation from the (0,0)-(n-1,m-1) diagonal, measured in units of the
    // longer axis so the test is symmetric under swapping the sequences.
    const long long lhs = std::llabs(static_cast<long long>(i) * (mi - 1) -
                                     static_cast<long long>(j) * (ni - 1));
    return lhs <= w_eff * std::max(ni - 1, mi - 1);
}

DtwResult dtw_banded(const float* a, size_t n, const float* b, size_t m, size_t dim,
                     size_t width) {
    if (n == 0 || m == 0) throw ParameterError("dtw_banded: sequences must be non-empty");

    std::vector<double> acc(n * m, kInf);
    auto cell = [&](size_t i, size_t j) -> double& { return acc[i * m + j]; };

    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
            if (!dtw_band_allows(n, m, width, i, j)) continue;
            const double cost = frame_distance(a + i * dim, b + j * dim, dim);
            if (i == 0 && j == 0) {
                cell(i, j) = cost;
                continue;
            }
            double best = kInf;
            if (i > 0 && j > 0) best = std::min(best, cell(i - 1, j - 1));
            if (i > 0) best = std::min(best, cell(i - 1, j));
            if (j > 0) best = std::min(best, cell(i, j - 1));
            if (best < kInf) cell(i, j) = best + cost;
        }
    }

    if (!(cell(n - 1, m - 1) < kInf))
        throw ProtocolError("dtw_banded: band leaves no feasible path"); // w_eff should prevent this

    DtwResult result;
    result.distance = cell(n - 1, m - 1);

    // Backtrack, preferring diagonal steps so identical sequences recover
    // the pure diagonal.
    size_t i = n - 1, j = m - 1;
    result.path.pairs.emplace_back(i, j);
    while (i > 0 || j > 0) {
        const double diag = (i > 0 && j > 0) ? cell(i - 1, j - 1) : kInf;
        const double up = i > 0 ? cell(i - 1, j) : kInf;
        const double left = j > 0 ? cell(i, j - 1) : kInf;
        if (diag <= up && diag <= left) {
            --i;
            --j;
        } else if (up <= left) {
            --i;
        } else {
            --j;
        }
        result.path.pairs.emplace_back(i, j);
    }
    std::reverse(result.path.pairs.begin(), result.path.pairs.end());
    return result;
}

DtwResult dtw_banded(const LandmarkSequence& a, const LandmarkSequence& b, size_t width) {
    return dtw_banded(a.frames.data(), a.num_frames(), b.frames.data(), b.num_frames(),
                      kFeatDim, width);
}

const LandmarkSequence& class_medoid(const std::vector<LandmarkSequence>& samples,
                                     size_t width) {
    if (samples.empty()) throw ParameterError("class_medoid: empty sample list");
    for (const auto& s : samples)
        if (s.label != samples.front().label)
            throw ParameterError("class_medoid: samples span multiple labels");
    if (samples.size() == 1) return samples.front();

    // Pairwise distances; DTW here is symmetric so compute each pair once.
    const size_t n = samples.size();
    std::vector<double> sums(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const double d = dtw_banded(samples[i], samples[j], width).distance;
            sums[i] += d;
            sums[j] += d;
        }
    }

    size_t best = 0;
    for (size_t i = 1; i < n; ++i) {
        if (sums[i] < sums[best] ||
            (sums[i] == sums[best] && samples[i].id < samples[best].id))
            best = i;
    }
    return samples[best];
}

LandmarkSequence align_to_template(const LandmarkSequence& seq,
                                   const LandmarkSequence& tmpl, size_t width) {
    const DtwResult dtw = dtw_banded(seq, tmpl, width);
    const size_t out_frames = tmpl.num_frames();

    LandmarkSequence out;
    out.label = seq.label;
    out.signer = seq.signer;
    out.id = seq.id;
    out.frames.assign(out_frames * kFeatDim, 0.0f);

    std::vector<double> accum(out_frames * kFeatDim, 0.0);
    std::vector<size_t> counts(out_frames, 0);
    for (const auto& [i, j] : dtw.path.pairs) {
        const float* src = seq.frame(i);
        double* dst = accum.data() + j * kFeatDim;
        for (size_t f = 0; f < kFeatDim; ++f) dst[f] += src[f];
        ++counts[j];
    }
    for (size_t j = 0; j < out_frames; ++j) {
        const double inv = 1.0 / static_cast<double>(counts[j]); // every j is on the path
        for (size_t f = 0; f < kFeatDim; ++f)
            out.at(j, f) = static_cast<float>(accum[j * kFeatDim + f] * inv);
    }
    return out;
}

} // namespace slr
