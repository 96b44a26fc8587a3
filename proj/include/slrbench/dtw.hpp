#pragma once

// Dynamic time warping with a Sakoe-Chiba band, plus the medoid/alignment
// helpers the preprocessing pipeline uses.
//
// For unequal lengths the band follows the slope-adjusted diagonal with an
// effective half-width w_eff = max(width, |n-m|); the test is symmetric in
// the two sequences and reduces to the classic |i-j| <= width when lengths
// match. Local cost is the Euclidean distance between frames.

#include <cstddef>
#include <utility>
#include <vector>

#include "slrbench/landmark.hpp"

namespace slr {

struct WarpPath {
    // Monotone (i, j) pairs from (0,0) to (n-1,m-1); each step increments
    // i, j, or both by exactly 1.
    std::vector<std::pair<size_t, size_t>> pairs;
};

struct DtwResult {
    double distance = 0.0;
    WarpPath path;
};

// True when cell (i, j) of an n x m warping matrix lies inside the band.
bool dtw_band_allows(size_t n, size_t m, size_t width, size_t i, size_t j);

DtwResult dtw_banded(const float* a, size_t n, const float* b, size_t m, size_t dim,
                     size_t width);

DtwResult dtw_banded(const LandmarkSequence& a, const LandmarkSequence& b, size_t width);

// The member minimizing the summed DTW distance to all other members;
// ties break toward the lexicographically smallest sample id.
const LandmarkSequence& class_medoid(const std::vector<LandmarkSequence>& samples,
                                     size_t width);

// Warps `seq` onto the template's time axis: output frame j averages every
// seq frame the optimal path pairs with j. Output length equals the
// template's length.
LandmarkSequence align_to_template(const LandmarkSequence& seq,
                                   const LandmarkSequence& tmpl, size_t width);

} // namespace slr
