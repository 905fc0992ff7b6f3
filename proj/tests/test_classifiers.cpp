#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "advfeat/gbt.hpp"
#include "advfeat/metrics.hpp"
#include "advfeat/mlp.hpp"
#include "advfeat/rng.hpp"
#include "advfeat/svm.hpp"

using namespace advfeat;

namespace {

// Two well separated Gaussian blobs in d dimensions.
void make_blobs(std::size_t n_per_class, std::size_t d, std::uint64_t seed, Matrix& x,
                std::vector<int>& y) {
    Rng rng(seed);
    x = Matrix(2 * n_per_class, d);
    y.assign(2 * n_per_class, 0);
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const int label = i < n_per_class ? 0 : 1;
        y[i] = label;
        const double center = label ? 2.0 : -2.0;
        for (std::size_t j = 0; j < d; ++j) x(i, j) = center + 0.5 * rng.normal();
    }
}

double fraction_correct(const std::vector<double>& scores, const std::vector<int>& y) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if ((scores[i] >= 0.5 ? 1 : 0) == y[i]) ++ok;
    return static_cast<double>(ok) / static_cast<double>(y.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// SVM
// ---------------------------------------------------------------------------

TEST_CASE("svm separates gaussian blobs") {
    Matrix x;
    std::vector<int> y;
    make_blobs(20, 2, 1, x, y);
    const SvmModel m = train_svm(x, y);
    REQUIRE(m.converged);
    REQUIRE(fraction_correct(svm_scores(m, x), y) == 1.0);
    REQUIRE(m.support_vectors.rows() >= 2);
    REQUIRE(m.support_vectors.rows() <= x.rows());
    for (double a : m.dual_coef) {
        REQUIRE(std::abs(a) <= 1.0 + 1e-9);  // |alpha * y| bounded by C
        REQUIRE(std::abs(a) > 1e-12);        // only genuine support vectors kept
    }
}

TEST_CASE("svm fits xor with an rbf kernel") {
    Matrix x(4, 2);
    x(0, 0) = 1.0;  x(0, 1) = 1.0;
    x(1, 0) = -1.0; x(1, 1) = -1.0;
    x(2, 0) = 1.0;  x(2, 1) = -1.0;
    x(3, 0) = -1.0; x(3, 1) = 1.0;
    const std::vector<int> y = {0, 0, 1, 1};
    const SvmModel m = train_svm(x, y, 10.0, 1.0);
    REQUIRE(fraction_correct(svm_scores(m, x), y) == 1.0);
    // Symmetry of the configuration keeps the bias small relative to the
    // decision values at the four corners.
    REQUIRE(std::abs(m.bias) < 0.5);
}

TEST_CASE("svm is deterministic for a fixed seed") {
    Matrix x;
    std::vector<int> y;
    make_blobs(15, 3, 9, x, y);
    const SvmModel a = train_svm(x, y, 1.0, 0.0, 1e-3, 200, 7);
    const SvmModel b = train_svm(x, y, 1.0, 0.0, 1e-3, 200, 7);
    REQUIRE(a.bias == b.bias);
    REQUIRE(a.dual_coef == b.dual_coef);
    REQUIRE(a.support_vectors.data() == b.support_vectors.data());
}

TEST_CASE("svm defaults gamma to one over dimension") {
    Matrix x;
    std::vector<int> y;
    make_blobs(10, 5, 4, x, y);
    REQUIRE(train_svm(x, y).gamma == 1.0 / 5.0);
    REQUIRE(train_svm(x, y, 1.0, 2.5).gamma == 2.5);
}

TEST_CASE("svm rejects bad input") {
    Matrix tiny(3, 2, 0.5);
    REQUIRE_THROWS_AS(train_svm(tiny, {0, 1, 0}), TooFewSamples);
    Matrix x(4, 2, 0.5);
    REQUIRE_THROWS_AS(train_svm(x, {0, 0, 0, 0}), SingleClass);
    REQUIRE_THROWS_AS(train_svm(x, {0, 1}), DimensionMismatch);
    x(1, 1) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(train_svm(x, {0, 1, 0, 1}), NonFiniteInput);

    Matrix ok;
    std::vector<int> y;
    make_blobs(5, 2, 3, ok, y);
    const SvmModel m = train_svm(ok, y);
    const double probe[3] = {0.0, 0.0, 0.0};
    REQUIRE_THROWS_AS(svm_decision(m, probe, 3), DimensionMismatch);
}

// ---------------------------------------------------------------------------
// MLP
// ---------------------------------------------------------------------------

TEST_CASE("mlp analytic gradients match central differences") {
    Rng rng(314);
    for (int rep = 0; rep < 5; ++rep) {
        MlpModel m = make_mlp({4, 8, 5, 2}, 100 + static_cast<std::uint64_t>(rep));
        Matrix x(6, 4);
        std::vector<int> y(6);
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 4; ++j) x(i, j) = rng.normal();
            y[i] = rng.uniform01() < 0.5 ? 1 : 0;
        }
        y[0] = 0;
        y[1] = 1;
        const auto [loss, grads] = mlp_loss_and_gradients(m, x, y);
        REQUIRE(loss == Catch::Approx(mlp_loss(m, x, y)).margin(1e-12));

        const double eps = 1e-5;
        auto check = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + eps;
            const double up = mlp_loss(m, x, y);
            param = saved - eps;
            const double down = mlp_loss(m, x, y);
            param = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double rel =
                std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            REQUIRE(rel < 1e-4);
        };
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            for (std::size_t r = 0; r < m.weights[l].rows(); ++r)
                for (std::size_t c = 0; c < m.weights[l].cols(); ++c)
                    check(m.weights[l](r, c), grads.weights[l](r, c));
            for (std::size_t b = 0; b < m.biases[l].size(); ++b)
                check(m.biases[l][b], grads.biases[l][b]);
        }
    }
}

TEST_CASE("mlp training separates blobs and is deterministic") {
    Matrix x;
    std::vector<int> y;
    make_blobs(30, 4, 55, x, y);
    const MlpModel m = train_mlp(x, y, nullptr, nullptr, 12, {8, 4});
    REQUIRE(m.epochs_used == 100);  // no validation set: fixed run
    REQUIRE(fraction_correct(mlp_scores(m, x), y) == 1.0);
    REQUIRE(mlp_loss(m, x, y) < 0.35);  // well under the ln 2 chance level

    const MlpModel m2 = train_mlp(x, y, nullptr, nullptr, 12, {8, 4});
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        REQUIRE(m.weights[l].data() == m2.weights[l].data());
        REQUIRE(m.biases[l] == m2.biases[l]);
    }
    const MlpModel m3 = train_mlp(x, y, nullptr, nullptr, 13, {8, 4});
    REQUIRE(m.weights[0].data() != m3.weights[0].data());  // seed matters
}

TEST_CASE("mlp training reduces the initial loss") {
    Matrix x;
    std::vector<int> y;
    make_blobs(20, 3, 8, x, y);
    const MlpModel init = make_mlp({3, 8, 4, 2}, 12);
    const MlpModel trained = train_mlp(x, y, nullptr, nullptr, 12, {8, 4});
    REQUIRE(mlp_loss(trained, x, y) < mlp_loss(init, x, y));
}

TEST_CASE("mlp early stopping keeps the best validation model") {
    Matrix x, vx;
    std::vector<int> y, vy;
    make_blobs(25, 3, 21, x, y);
    make_blobs(10, 3, 22, vx, vy);
    const MlpModel m = train_mlp(x, y, &vx, &vy, 33, {8, 4});
    REQUIRE(m.epochs_used >= 1);
    REQUIRE(m.epochs_used <= 200);
    REQUIRE(fraction_correct(mlp_scores(m, vx), vy) == 1.0);
}

TEST_CASE("mlp layer shape follows the contract") {
    Matrix x;
    std::vector<int> y;
    make_blobs(10, 7, 2, x, y);
    const MlpModel m = train_mlp(x, y, nullptr, nullptr, 1);
    REQUIRE(m.layers == std::vector<std::size_t>{7, 64, 32, 2});
    REQUIRE(m.weights[0].rows() == 64);
    REQUIRE(m.weights[0].cols() == 7);
    REQUIRE(m.weights[2].rows() == 2);
}

TEST_CASE("mlp rejects bad input") {
    Matrix x(4, 2, 0.5);
    REQUIRE_THROWS_AS(train_mlp(x, {1, 1, 1, 1}, nullptr, nullptr, 0), SingleClass);
    REQUIRE_THROWS_AS(train_mlp(Matrix(2, 2, 0.1), {0, 1}, nullptr, nullptr, 0), TooFewSamples);
}

// ---------------------------------------------------------------------------
// GBT
// ---------------------------------------------------------------------------

TEST_CASE("gbt first split gain matches the hand-computed formula") {
    // Six points on one feature, labels 000111. At the first round every
    // margin is 0, so p = 1/2, g
    //  = 1/2 - y, h = 1/4:
    //   G_L = 3/2, H_L = 3/4 (left of 3.5), G_R = -3/2, H_R = 3/4
    //   gain = 1/2 [ G_L^2/(H_L+1) + G_R^2/(H_R+1) - 0 ] = (3/2)^2/(7/4) = 9/7
    Matrix x(6, 1);
    for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i + 1);
    const std::vector<int> y = {0, 0, 0, 1, 1, 1};
    const GbtModel m = train_gbt(x, y, 1, 1, 0.1, 1.0, 0.0);
    REQUIRE(m.trees.size() == 1);
    const GbtNode& root = m.trees[0].nodes[0];
    REQUIRE_FALSE(root.is_leaf);
    REQUIRE(root.feature == 0);
    REQUIRE(root.threshold == Catch::Approx(3.5).margin(1e-15));
    REQUIRE(root.gain == Catch::Approx(9.0 / 7.0).margin(1e-12));
    REQUIRE(root.cover == Catch::Approx(1.5).margin(1e-12));
    // Leaf weights -G/(H+lambda): clean side positive gradient, negative leaf.
    const GbtNode& left = m.trees[0].nodes[root.left];
    const GbtNode& right = m.trees[0].nodes[root.right];
    REQUIRE(left.value == Catch::Approx(-1.5 / 1.75).margin(1e-12));
    REQUIRE(right.value == Catch::Approx(1.5 / 1.75).margin(1e-12));
}

TEST_CASE("gbt respects the minimum child hessian") {
    // Same six points with the default constraint of 1.0: every split would
    // leave a child below 4 * 0.25 hessian mass, so the tree stays a leaf.
    Matrix x(6, 1);
    for (std::size_t i = 0; i < 6; ++i) x(i, 0) = static_cast<double>(i + 1);
    const std::vector<int> y = {0, 0, 0, 1, 1, 1};
    const GbtModel m = train_gbt(x, y, 1, 6, 0.1, 1.0, 1.0);
    REQUIRE(m.trees[0].nodes.size() == 1);
    REQUIRE(m.trees[0].nodes[0].is_leaf);
    // Balanced labels: root leaf value is -G/(H+lambda) = 0.
    REQUIRE(m.trees[0].nodes[0].value == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("gbt tie-break picks the first feature") {
    // Feature 1 duplicates feature 0, so both give identical gains
    // everywhere; the split must land on feature 0.
    Matrix x(8, 2);
    for (std::size_t i = 0; i < 8; ++i) {
        x(i, 0) = static_cast<double>(i);
        x(i, 1) = static_cast<double>(i);
    }
    const std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
    const GbtModel m = train_gbt(x, y, 1, 1, 0.1, 1.0, 0.5);
    REQUIRE_FALSE(m.trees[0].nodes[0].is_leaf);
    REQUIRE(m.trees[0].nodes[0].feature == 0);
}

TEST_CASE("gbt thresholds sit midway between distinct values") {
    Matrix x(4, 1);
    x(0, 0) = 0.0;
    x(1, 0) = 0.0;
    x(2, 0) = 1.0;
    x(3, 0) = 1.0;
    const std::vector<int> y = {0, 0, 1, 1};
    const GbtModel m = train_gbt(x, y, 1, 1, 0.1, 1.0, 0.0);
    REQUIRE(m.trees[0].nodes[0].threshold == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("gbt training loss is non-increasing per round") {
    Matrix x;
    std::vector<int> y;
    make_blobs(20, 3, 77, x, y);
    double prev = std::log(2.0);  // empty model: margins 0
    for (std::size_t rounds = 1; rounds <= 12; ++rounds) {
        const GbtModel m = train_gbt(x, y, rounds, 3, 0.1, 1.0, 1.0);
        const double loss = gbt_loss(m, x, y);
        REQUIRE(loss <= prev + 1e-12);
        prev = loss;
    }
}

TEST_CASE("gbt separates blobs at full configuration") {
    Matrix x;
    std::vector<int> y;
    make_blobs(30, 4, 5, x, y);
    const GbtModel m = train_gbt(x, y);
    REQUIRE(m.trees.size() == 100);
    const auto scores = gbt_scores(m, x);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if ((scores[i] >= 0.5 ? 1 : 0) == y[i]) ++ok;
    REQUIRE(ok == y.size());
}

TEST_CASE("gbt depth limit holds") {
    Matrix x;
    std::vector<int> y;
    make_blobs(40, 3, 6, x, y);
    const GbtModel m = train_gbt(x, y, 5, 2, 0.1, 1.0, 0.25);
    for (const GbtTree& t : m.trees) {
        // Depth <= 2 means at most 7 nodes.
        REQUIRE(t.nodes.size() <= 7);
    }
}

TEST_CASE("gbt rejects bad input") {
    Matrix x(4, 2, 0.5);
    REQUIRE_THROWS_AS(train_gbt(x, {0, 0, 0, 0}), SingleClass);
    REQUIRE_THROWS_AS(train_gbt(Matrix(3, 2, 0.1), {0, 1, 0}), TooFewSamples);
    // Only feature 1 carries signal, so every split references it and a
    // 1-wide probe must trip the dimension check.
    Matrix ok(8, 2);
    std::vector<int> y2(8);
    for (std::size_t i = 0; i < 8; ++i) {
        ok(i, 0) = 0.5;
        ok(i, 1) = static_cast<double>(i);
        y2[i] = i < 4 ? 0 : 1;
    }
    const GbtModel m = train_gbt(ok, y2, 3, 2, 0.1, 1.0, 0.5);
    REQUIRE_FALSE(m.trees[0].nodes[0].is_leaf);
    const double probe[1] = {0.0};
    REQUIRE_THROWS_AS(gbt_margin(m, probe, 1), DimensionMismatch);
}
