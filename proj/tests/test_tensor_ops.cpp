#include <doctest.h>

#include "slrbench/ops.hpp"

using namespace slr;

namespace {

// Scalar triple-loop reference for matmul, independent of the library path.
TensorD matmul_oracle(const TensorD& a, const TensorD& b) {
    const size_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
    TensorD c({m, n});
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (size_t p = 0; p < k; ++p) acc += a.at(i, p) * b.at(p, j);
            c.at(i, j) = acc;
        }
    return c;
}

// Direct six-nested-loop reference for same-padded 3x3 cross-correlation.
TensorD conv_oracle(const TensorD& input, const TensorD& kernels, const TensorD& bias) {
    const size_t h = input.extent(0), w = input.extent(1), cin = input.extent(2);
    const size_t cout = kernels.extent(3);
    TensorD out({h, w, cout});
    for (size_t y = 0; y < h; ++y)
        for (size_t x = 0; x < w; ++x)
            for (size_t co = 0; co < cout; ++co) {
                double acc = bias[co];
                for (size_t ky = 0; ky < 3; ++ky)
                    for (size_t kx = 0; kx < 3; ++kx)
                        for (size_t ci = 0; ci < cin; ++ci) {
                            const long iy = static_cast<long>(y) + static_cast<long>(ky) - 1;
                            const long ix = static_cast<long>(x) + static_cast<long>(kx) - 1;
                            if (iy < 0 || iy >= static_cast<long>(h) || ix < 0 ||
                                ix >= static_cast<long>(w))
                                continue;
                            acc += input.at(static_cast<size_t>(iy), static_cast<size_t>(ix),
                                            ci) *
                                   kernels.at(ky, kx, ci, co);
                        }
                out.at(y, x, co) = acc;
            }
    return out;
}

TensorD random_tensor(std::vector<size_t> shape, Rng& rng, double scale = 1.0) {
    TensorD t(std::move(shape));
    for (size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-scale, scale);
    return t;
}

double max_rel_diff(const TensorD& a, const TensorD& b) {
    REQUIRE(a.same_shape(b));
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max(1.0, std::abs(b[i]));
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

} // namespace

TEST_CASE("tensor shape/value agreement is enforced") {
    CHECK_THROWS_AS(TensorD({2, 3}, {1.0, 2.0}), DimensionError);
    CHECK_THROWS_AS(TensorD({2, 0}), DimensionError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(TensorD({2}, {1.0, nan}), DataError);
}

TEST_CASE("matmul: identity, hand arithmetic, and shape errors") {
    Rng rng(1, "matmul");
    const TensorD a = random_tensor({3, 3}, rng);
    const TensorD prod = matmul(TensorD::identity(3), a);
    for (size_t i = 0; i < a.size(); ++i) CHECK(prod[i] == doctest::Approx(a[i]).epsilon(1e-12));

    const TensorD m({2, 2}, {1, 2, 3, 4});
    const TensorD v({2, 1}, {0, 1});
    const TensorD out = matmul(m, v);
    CHECK(out.at(0, 0) == 2);
    CHECK(out.at(1, 0) == 4);

    CHECK_THROWS_AS(matmul(TensorD({2, 3}), TensorD({2, 3})), DimensionError);
}

TEST_CASE("matmul matches the triple-loop oracle on random inputs") {
    Rng rng(2, "matmul-oracle");
    const TensorD a = random_tensor({5, 7}, rng);
    const TensorD b = random_tensor({7, 3}, rng);
    CHECK(max_rel_diff(matmul(a, b), matmul_oracle(a, b)) < 1e-6);

    for (int trial = 0; trial < 100; ++trial) {
        const size_t m = 1 + rng.below(6), k = 1 + rng.below(6), n = 1 + rng.below(6);
        const TensorD x = random_tensor({m, k}, rng, 2.0);
        const TensorD y = random_tensor({k, n}, rng, 2.0);
        CHECK(max_rel_diff(matmul(x, y), matmul_oracle(x, y)) < 1e-6);
    }
}

TEST_CASE("conv2d_same: zero input, single-pixel center tap, channel mismatch") {
    Rng rng(3, "conv");
    const TensorD kernels = random_tensor({3, 3, 2, 3}, rng);
    SUBCASE("all-zero input with zero bias stays zero") {
        const TensorD out = conv2d_same(TensorD({5, 4, 2}), kernels, TensorD({3}));
        for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.0);
    }
    SUBCASE("1x1 input sees only the center tap plus bias") {
        const TensorD input = random_tensor({1, 1, 2}, rng);
        const TensorD bias = random_tensor({3}, rng);
        const TensorD out = conv2d_same(input, kernels, bias);
        for (size_t co = 0; co < 3; ++co) {
            double want = bias[co];
            for (size_t ci = 0; ci < 2; ++ci) want += input.at(0, 0, ci) * kernels.at(1, 1, ci, co);
            CHECK(out.at(0, 0, co) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    SUBCASE("channel mismatch is a dimension error") {
        CHECK_THROWS_AS(conv2d_same(TensorD({5, 4, 3}), kernels, TensorD({3})), DimensionError);
    }
}

TEST_CASE("conv2d_same matches the nested-loop oracle on random inputs") {
    Rng rng(4, "conv-oracle");
    const TensorD input = random_tensor({5, 4, 2}, rng);
    const TensorD kernels = random_tensor({3, 3, 2, 3}, rng);
    const TensorD bias = random_tensor({3}, rng);
    CHECK(max_rel_diff(conv2d_same(input, kernels, bias), conv_oracle(input, kernels, bias)) <
          1e-6);

    for (int trial = 0; trial < 100; ++trial) {
        const size_t h = 1 + rng.below(6), w = 1 + rng.below(6);
        const size_t cin = 1 + rng.below(3), cout = 1 + rng.below(3);
        const TensorD x = random_tensor({h, w, cin}, rng, 2.0);
        const TensorD k = random_tensor({3, 3, cin, cout}, rng, 2.0);
        const TensorD b = random_tensor({cout}, rng, 2.0);
        CHECK(max_rel_diff(conv2d_same(x, k, b), conv_oracle(x, k, b)) < 1e-6);
    }
}

TEST_CASE("softmax: symmetry, analytic values, stability, invariants") {
    const TensorD even = softmax(TensorD({4}, {2.5, 2.5, 2.5, 2.5}));
    for (size_t i = 0; i < 4; ++i) CHECK(even[i] == doctest::Approx(0.25).epsilon(1e-12));

    const TensorD two = softmax(TensorD({2}, {0.0, std::log(2.0)}));
    CHECK(two[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const TensorD big = softmax(TensorD({2}, {1000.0, 1001.0}));
    const TensorD small = softmax(TensorD({2}, {0.0, 1.0}));
    CHECK(std::isfinite(big[0]));
    CHECK(big[0] == doctest::Approx(small[0]).epsilon(1e-9));

    Rng rng(5, "softmax");
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 1 + rng.below(12);
        TensorD logits({n});
        for (size_t i = 0; i < n; ++i) logits[i] = rng.uniform(-30.0, 30.0);
        const TensorD p = softmax(logits);
        double sum = 0.0;
        size_t argmax_in = 0, argmax_out = 0;
        for (size_t i = 0; i < n; ++i) {
            CHECK(p[i] > 0.0);
            sum += p[i];
            if (logits[i] > logits[argmax_in]) argmax_in = i;
            if (p[i] > p[argmax_out]) argmax_out = i;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(argmax_in == argmax_out);

        // Shift invariance.
        const double c = rng.uniform(-50.0, 50.0);
        TensorD shifted = logits;
        for (size_t i = 0; i < n; ++i) shifted[i] += c;
        const TensorD p2 = softmax(shifted);
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(p[i] - p2[i]) < 1e-6);
    }

    CHECK_THROWS_AS(softmax(TensorD({2, 2})), DimensionError);
}

TEST_CASE("layer_norm: constant vector, unit pair, direct formula") {
    const TensorD ones = TensorD::full({4}, 1.0);
    const TensorD zeros({4});
    const TensorD constant = layer_norm(TensorD::full({4}, 3.7), ones, zeros, 1e-5);
    for (size_t i = 0; i < 4; ++i) CHECK(std::abs(constant[i]) < 1e-9);

    const TensorD pair =
        layer_norm(TensorD({2}, {1.0, -1.0}), TensorD::full({2}, 1.0), TensorD({2}), 1e-12);
    CHECK(pair[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pair[1] == doctest::Approx(-1.0).epsilon(1e-9));

    Rng rng(6, "layernorm");
    const size_t d = 16;
    TensorD x({d}), gain({d}), shift({d});
    for (size_t i = 0; i < d; ++i) {
        x[i] = rng.uniform(-2.0, 2.0);
        gain[i] = rng.uniform(0.5, 1.5);
        shift[i] = rng.uniform(-1.0, 1.0);
    }
    const double eps = 1e-5;
    const TensorD out = layer_norm(x, gain, shift, eps);
    double mean = 0.0;
    for (size_t i = 0; i < d; ++i) mean += x[i];
    mean /= d;
    double var = 0.0;
    for (size_t i = 0; i < d; ++i) var += (x[i] - mean) * (x[i] - mean);
    var /= d;
    for (size_t i = 0; i < d; ++i) {
        const double want = (x[i] - mean) / std::sqrt(var + eps) * gain[i] + shift[i];
        CHECK(out[i] == doctest::Approx(want).epsilon(1e-12));
    }

    // Normalized output (before gain/shift) has zero mean and unit variance.
    const TensorD unit = layer_norm(x, TensorD::full({d}, 1.0), TensorD({d}), eps);
    double m2 = 0.0, v2 = 0.0;
    for (size_t i = 0; i < d; ++i) m2 += unit[i];
    m2 /= d;
    for (size_t i = 0; i < d; ++i) v2 += (unit[i] - m2) * (unit[i] - m2);
    v2 /= d;
    CHECK(std::abs(m2) < 1e-9);
    CHECK(v2 == doctest::Approx(1.0).epsilon(1e-3));

    CHECK_THROWS_AS(layer_norm(x, gain, shift, 0.0), ParameterError);
}

TEST_CASE("dropout: identity cases, parameter guard, expectation preserved") {
    Rng rng(7, "dropout");
    TensorD x = TensorD::full({100}, 2.0);

    const TensorD p0 = dropout(x, 0.0, rng, true);
    for (size_t i = 0; i < x.size(); ++i) CHECK(p0[i] == x[i]);

    const TensorD inference = dropout(x, 0.3, rng, false);
    for (size_t i = 0; i < x.size(); ++i) CHECK(inference[i] == x[i]);

    CHECK_THROWS_AS(dropout(x, 1.0, rng, true), ParameterError);

    TensorD big = TensorD::full({100000}, 1.0);
    const TensorD dropped = dropout(big, 0.3, rng, true);
    double sum = 0.0;
    for (size_t i = 0; i < dropped.size(); ++i) sum += dropped[i];
    const double mean = sum / static_cast<double>(dropped.size());
    CHECK(mean > 0.98);
    CHECK(mean < 1.02);
}
