#include "slrbench/spline.hpp"

#include <algorithm>
#include <cmath>

namespace slr {

CubicSpline::CubicSpline(std::vector<double> values) : y_(std::move(values)) {
    const size_t n = y_.size();
    if (n < 2) throw ParameterError("CubicSpline: need at least 2 knots");
    h_ = 1.0 / static_cast<double>(n - 1);
    m_.assign(n, 0.0);
    if (n == 2) return; // linear segment, second derivatives stay zero

    // Tridiagonal system for interior second derivatives (Thomas algorithm).
    // With uniform spacing h: m[i-1] + 4 m[i] + m[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2.
    const size_t interior = n - 2;
    std::vector<double> c(interior, 0.0); // superdiagonal after elimination
    std::vector<double> d(interior, 0.0); // rhs after elimination
    for (size_t i = 0; i < interior; ++i) {
        const double rhs = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (h_ * h_);
        if (i == 0) {
            c[i] = 1.0 / 4.0;
            d[i] = rhs / 4.0;
        } else {
            const double denom = 4.0 - c[i - 1];
            c[i] = 1.0 / denom;
            d[i] = (rhs - d[i - 1]) / denom;
        }
    }
    for (size_t i = interior; i-- > 0;)
        m_[i + 1] = d[i] - (i + 1 < interior ? c[i] * m_[i + 2] : 0.0);
}

double CubicSpline::operator()(double t) const {
    const size_t n = y_.size();
    // Clamp the segment index, not the time: past either end the boundary
    // segment's cubic keeps evaluating, which reproduces affine data exactly.
    double pos = t / h_;
    size_t k;
    if (pos <= 0.0) {
        k = 0;
    } else if (pos >= static_cast<double>(n - 2)) {
        k = n - 2;
    } else {
        k = static_cast<size_t>(pos);
    }
    const double dx = t - static_cast<double>(k) * h_;
    const double a = (m_[k + 1] - m_[k]) / (6.0 * h_);
    const double b = m_[k] / 2.0;
    const double c = (y_[k + 1] - y_[k]) / h_ - h_ * (2.0 * m_[k] + m_[k + 1]) / 6.0;
    return y_[k] + dx * (c + dx * (b + dx * a));
}

std::vector<double> resample_column(const std::vector<double>& values, size_t target) {
    if (values.size() < 2) throw ParameterError("resample_column: need at least 2 knots");
    if (target < 2) throw ParameterError("resample_column: target must be at least 2");
    const CubicSpline spline(values);
    std::vector<double> out(target);
    for (size_t j = 0; j < target; ++j)
        out[j] = spline(static_cast<double>(j) / static_cast<double>(target - 1));
    return out;
}

LandmarkSequence resample_cubic(const LandmarkSequence& seq, size_t target) {
    const size_t t = seq.num_frames();
    if (t < 2) throw ParameterError("resample_cubic: sequence must have at least 2 frames");
    if (target < 2) throw ParameterError("resample_cubic: target must be at least 2");

    LandmarkSequence out;
    out.label = seq.label;
    out.signer = seq.signer;
    out.id = seq.id;
    out.frames.assign(target * kFeatDim, 0.0f);

    std::vector<double> column(t);
    for (size_t f = 0; f < kFeatDim; ++f) {
        for (size_t i = 0; i < t; ++i) column[i] = seq.at(i, f);
        const std::vector<double> resampled = resample_column(column, target);
        for (size_t j = 0; j < target; ++j) out.at(j, f) = static_cast<float>(resampled[j]);
    }
    return out;
}

} // namespace slr
