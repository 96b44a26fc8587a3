#pragma once

// Finite-difference verification of analytic gradients.
//
// Runs in 64-bit: float-precision central differences are too noisy at
// h=1e-5 to distinguish real gradient bugs from rounding.

#include <functional>

#include "slrbench/tensor.hpp"

namespace slr {

struct GradCheckResult {
    double max_rel_error = 0.0;
    size_t worst_index = 0;
};

// Compares `analytic_grad(x)` against central finite differences of `f`
// with step h. Error per coordinate is |g_a - g_fd| / max(1, |g_fd|).
inline GradCheckResult grad_check(const std::function<double(const TensorD&)>& f,
                                  const std::function<TensorD(const TensorD&)>& analytic_grad,
                                  const TensorD& x, double h = 1e-5) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw EvaluationError("grad_check: f(x) is not finite");

    const TensorD ga = analytic_grad(x);
    if (!ga.same_shape(x))
        throw DimensionError("grad_check: gradient shape " + ga.shape_str() +
                             " does not match x " + x.shape_str());

    GradCheckResult result;
    TensorD probe = x;
    for (size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        probe[i] = xi + h;
        const double fp = f(probe);
        probe[i] = xi - h;
        const double fm = f(probe);
        probe[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw EvaluationError("grad_check: perturbed evaluation is not finite");
        const double gfd = (fp - fm) / (2.0 * h);
        const double err = std::abs(ga[i] - gfd) / std::max(1.0, std::abs(gfd));
        if (err > result.max_rel_error) {
            result.max_rel_error = err;
            result.worst_index = i;
        }
    }
    return result;
}

} // namespace slr
