#include <doctest.h>

#include "slrbench/grad_check.hpp"
#include "slrbench/loss.hpp"
#include "slrbench/ops.hpp"
#include "slrbench/optim.hpp"

using namespace slr;

TEST_CASE("label-smoothed loss: uniform prediction costs ln K") {
    for (const size_t k : {2u, 5u, 10u}) {
        const TensorD logits = TensorD::full({1, k}, 0.7);
        const auto result = label_smoothed_loss(logits, {0}, 0.1);
        CHECK(result.loss == doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-9));
    }
}

TEST_CASE("loss at the smoothed target equals the target's entropy") {
    // K=10, eps=0.1: q = (0.91, 0.01 x 9); logits = ln q realizes q.
    const size_t k = 10;
    const double eps = 0.1;
    TensorD logits({1, k});
    logits[0] = std::log(0.91);
    for (size_t j = 1; j < k; ++j) logits[j] = std::log(0.01);
    const auto result = label_smoothed_loss(logits, {0}, eps);
    const double entropy = 0.91 * std::log(1.0 / 0.91) + 9 * 0.01 * std::log(100.0);
    CHECK(entropy == doctest::Approx(0.5002).epsilon(1e-3));
    CHECK(result.loss == doctest::Approx(entropy).epsilon(1e-9));

    // Gradient vanishes exactly at the optimum.
    for (size_t j = 0; j < k; ++j) CHECK(std::abs(result.dlogits[j]) <= 1e-12);
}

TEST_CASE("loss gradient matches finite differences") {
    Rng rng(1, "loss-grad");
    TensorD logits({3, 6});
    for (size_t i = 0; i < logits.size(); ++i) logits[i] = rng.uniform(-2.0, 2.0);
    const std::vector<int> targets{4, 0, 2};

    auto f = [&](const TensorD& x) { return label_smoothed_loss(x, targets, 0.1).loss; };
    auto grad = [&](const TensorD& x) { return label_smoothed_loss(x, targets, 0.1).dlogits; };
    CHECK(grad_check(f, grad, logits).max_rel_error <= 1e-6);
}

TEST_CASE("loss floor: gradient descent on logits converges to entropy(q)") {
    const size_t k = 7;
    const double eps = 0.1;
    TensorD logits({1, k});
    Rng rng(2, "floor");
    for (size_t j = 0; j < k; ++j) logits[j] = rng.uniform(-1.0, 1.0);

    double loss = 0.0;
    for (int step = 0; step < 20000; ++step) {
        const auto result = label_smoothed_loss(logits, {3}, eps);
        loss = result.loss;
        for (size_t j = 0; j < k; ++j) logits[j] -= 5.0 * result.dlogits[j];
    }
    const double uniform = eps / static_cast<double>(k);
    double entropy = -(1.0 - eps + uniform) * std::log(1.0 - eps + uniform);
    for (size_t j = 1; j < k; ++j) entropy -= uniform * std::log(uniform);
    CHECK(loss >= entropy - 1e-9);
    CHECK(loss == doctest::Approx(entropy).epsilon(1e-6));

    // At convergence softmax(logits) == q.
    const TensorD p = softmax(TensorD({k}, std::vector<double>(logits.values())));
    CHECK(p[3] == doctest::Approx(1.0 - eps + uniform).epsilon(1e-4));
}

TEST_CASE("loss guards: bad targets and silly class counts") {
    CHECK_THROWS_AS(label_smoothed_loss(TensorD({1, 4}), {4}, 0.1), ParameterError);
    CHECK_THROWS_AS(label_smoothed_loss(TensorD({1, 1}), {0}, 0.1), ParameterError);
    CHECK_THROWS_AS(label_smoothed_loss(TensorD({2, 4}), {0}, 0.1), DimensionError);
}

namespace {

ParamSet<double> scalar_params(double value) {
    ParamSet<double> p;
    p.add("w", TensorD({1}, {value}));
    return p;
}

} // namespace

TEST_CASE("adamw: zero gradient leaves parameters alone but advances the step") {
    ParamSet<double> params = scalar_params(1.5);
    AdamState<double> state = AdamState<double>::for_params(params);
    adamw_step(params, scalar_params(0.0), state, 1e-3, 0.0);
    CHECK(params["w"][0] == 1.5);
    CHECK(state.step == 1);
}

TEST_CASE("adamw: bias-corrected first step is -lr * sign(g) up to eps") {
    ParamSet<double> params = scalar_params(0.0);
    AdamState<double> state = AdamState<double>::for_params(params);
    adamw_step(params, scalar_params(0.1), state, 1e-3, 0.0);
    CHECK(params["w"][0] == doctest::Approx(-1e-3).epsilon(1e-6));
}

TEST_CASE("adamw: three-step scalar trace matches the hand recurrence") {
    const double lr = 1e-3, wd = 1e-5;
    const double grads[3] = {0.1, -0.25, 0.07};

    ParamSet<double> params = scalar_params(0.5);
    AdamState<double> state = AdamState<double>::for_params(params);

    double p = 0.5, m = 0.0, v = 0.0;
    for (int t = 1; t <= 3; ++t) {
        adamw_step(params, scalar_params(grads[t - 1]), state, lr, wd);

        p -= lr * wd * p;
        m = 0.9 * m + 0.1 * grads[t - 1];
        v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
        const double m_hat = m / (1.0 - std::pow(0.9, t));
        const double v_hat = v / (1.0 - std::pow(0.999, t));
        p -= lr * m_hat / (std::sqrt(v_hat) + 1e-8);

        CHECK(std::abs(params["w"][0] - p) <= 1e-10);
    }
}

TEST_CASE("one clipped adamw step moves every parameter with a nonzero gradient") {
    Rng rng(9, "adamw-move");
    ParamSet<double> params;
    params.add("a", TensorD({4}, {0.1, -0.2, 0.3, -0.4}));
    params.add("b", TensorD({3}, {1.0, 2.0, 3.0}));
    ParamSet<double> grads = ParamSet<double>::zeros_like(params);
    for (size_t i = 0; i < grads.count(); ++i)
        for (size_t j = 0; j < grads.tensor(i).size(); ++j)
            grads.tensor(i)[j] = rng.uniform(0.5, 3.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);

    const ParamSet<double> before = params;
    AdamState<double> state = AdamState<double>::for_params(params);
    clip_global_norm(grads, 1.0);
    adamw_step(params, grads, state, 1e-3, 1e-5);
    for (size_t i = 0; i < params.count(); ++i)
        for (size_t j = 0; j < params.tensor(i).size(); ++j)
            CHECK(params.tensor(i)[j] != before.tensor(i)[j]);
}

TEST_CASE("adamw rejects mismatched gradient shapes") {
    ParamSet<double> params = scalar_params(1.0);
    AdamState<double> state = AdamState<double>::for_params(params);
    ParamSet<double> bad;
    bad.add("w", TensorD({2}));
    CHECK_THROWS_AS(adamw_step(params, bad, state, 1e-3, 0.0), DimensionError);
}

TEST_CASE("clip_global_norm: identity below threshold, exact scaling above") {
    ParamSet<double> small;
    small.add("a", TensorD({2}, {0.3, 0.4})); // norm 0.5
    const double norm = clip_global_norm(small, 1.0);
    CHECK(norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(small["a"][0] == 0.3);
    CHECK(small["a"][1] == 0.4);

    ParamSet<double> single;
    single.add("g", TensorD({1}, {2.0}));
    clip_global_norm(single, 1.0);
    CHECK(single["g"][0] == doctest::Approx(1.0).epsilon(1e-12));

    // Two tensors with norms 3 and 4: global norm 5, scale 0.2.
    ParamSet<double> pair;
    pair.add("a", TensorD({1}, {3.0}));
    pair.add("b", TensorD({1}, {4.0}));
    const double pre = clip_global_norm(pair, 1.0);
    CHECK(pre == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(pair["a"][0] == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(pair["b"][0] == doctest::Approx(0.8).epsilon(1e-9));
    const double post = std::sqrt(pair["a"][0] * pair["a"][0] + pair["b"][0] * pair["b"][0]);
    CHECK(std::abs(post - 1.0) <= 1e-7);
}
