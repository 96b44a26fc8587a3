#pragma once

// Natural cubic splines over uniformly spaced knots in [0, 1], and the
// fixed-length resampling built on them. Spline math runs in double even
// though frame data is float32.

#include <vector>

#include "slrbench/landmark.hpp"

namespace slr {

// One-dimensional natural cubic spline with knots at k/(n-1). Times
// outside [0, 1] evaluate the nearest boundary segment's polynomial, so
// affine data stays affine under mild extrapolation.
class CubicSpline {
  public:
    explicit CubicSpline(std::vector<double> values);

    double operator()(double t) const;
    size_t num_knots() const { return y_.size(); }

  private:
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at knots, m_front = m_back = 0
    double h_ = 0.0;        // knot spacing 1/(n-1)
};

// One feature column resampled to `target` uniform points; all math in
// double. Affine columns come back exact.
std::vector<double> resample_column(const std::vector<double>& values, size_t target);

// Resamples every feature dimension independently to `target` uniformly
// spaced frames over the sequence's normalized time axis. Values pass
// through float32, so the wire-level error floor is float quantization.
LandmarkSequence resample_cubic(const LandmarkSequence& seq, size_t target = kStandardFrames);

} // namespace slr
