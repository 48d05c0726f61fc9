#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gad/classifier.hpp"
#include "gad/errors.hpp"
#include "test_support.hpp"

using namespace gad;
using gad::testing::random_matrix;

TEST_CASE("linear head on a hand example") {
    const DenseMatrix emb{{1, 0}, {0, 2}, {5, 5}};
    const std::size_t users[] = {0, 1};
    const auto p = predict_scores(emb, users, 2, DenseMatrix{{1}, {0.5}}, 0.0);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == doctest::Approx(0.7310585786));
    CHECK(p[1] == doctest::Approx(0.7310585786));
    const auto q = predict_scores(emb, users, 2, DenseMatrix{{1}, {0.5}}, -1.0);
    CHECK(q[0] == doctest::Approx(0.5));
}

TEST_CASE("zero weights score everyone one half") {
    const DenseMatrix emb = random_matrix(6, 4, 1);
    const std::size_t users[] = {3, 0, 5};
    for (double p : predict_scores(emb, users, 6, DenseMatrix(4, 1), 0.0)) CHECK(p == 0.5);
}

TEST_CASE("scores follow the requested order") {
    const DenseMatrix emb{{1}, {2}, {3}};
    const std::size_t fwd[] = {0, 1, 2}, rev[] = {2, 1, 0};
    const auto a = predict_scores(emb, fwd, 3, DenseMatrix{{1}}, 0.0);
    const auto b = predict_scores(emb, rev, 3, DenseMatrix{{1}}, 0.0);
    CHECK(a[0] == b[2]);
    CHECK(a[2] == b[0]);
    CHECK(a[0] < a[1]);
    CHECK(a[1] < a[2]);
}

TEST_CASE("object ids are rejected") {
    const DenseMatrix emb = random_matrix(5, 2, 2);
    const std::size_t ids[] = {0, 3};
    CHECK_THROWS_AS(predict_scores(emb, ids, 3, DenseMatrix(2, 1), 0.0), std::out_of_range);
}

TEST_CASE("cross-entropy values") {
    const double p[] = {0.8, 0.3};
    const int y[] = {1, 0};
    const double expected = -(std::log(0.8) + std::log(0.7)) / 2.0;
    CHECK(ce_loss(p, y) == doctest::Approx(expected));
    const double half[] = {0.5, 0.5, 0.5};
    const int y3[] = {1, 0, 1};
    CHECK(ce_loss(half, y3) == doctest::Approx(std::log(2.0)));
    const double sure[] = {1.0, 0.0};
    CHECK(std::isfinite(ce_loss(sure, std::span<const int>(y3, 2))));
    CHECK_THROWS_AS(ce_loss(std::span<const double>{}, std::span<const int>{}), DataError);
    const int bad[] = {1, 2};
    CHECK_THROWS_AS(ce_loss(p, bad), DataError);
}

TEST_CASE("cross-entropy rises as the positive's score falls") {
    const int y[] = {1};
    double prev = 0.0;
    for (double q : {0.99, 0.9, 0.7, 0.5, 0.2, 0.01}) {
        const double p[] = {q};
        const double l = ce_loss(p, y);
        CHECK(l > prev);
        prev = l;
    }
}

TEST_CASE("logit and probability forms agree") {
    Tape t;
    const DenseMatrix z{{-2.0}, {0.3}, {1.5}, {4.0}};
    const int y[] = {0, 1, 0, 1};
    Var zl = t.constant(z);
    Var p = ad::activate(zl, Activation::sigmoid());
    CHECK(ce_loss_logits(zl, y).value()(0, 0) == doctest::Approx(ce_loss(p, y).value()(0, 0)).epsilon(1e-12));
    const double w[] = {0.25, 3.0};
    CHECK(ce_loss_logits(zl, y, w).value()(0, 0) == doctest::Approx(ce_loss(p, y, w).value()(0, 0)).epsilon(1e-12));
}

TEST_CASE("classifier gradients match finite differences") {
    const DenseMatrix emb = random_matrix(7, 3, 5);
    const std::size_t users[] = {0, 2, 3, 5};
    const int y[] = {1, 0, 0, 1};
    ParameterStore s;
    s.add(kClassifierWeight, random_matrix(3, 1, 6));
    s.add(kClassifierBias, DenseMatrix{{0.2}});
    s.add("emb", emb);
    auto loss = [&](Tape& t, const ParameterStore& st) {
        Var z = predict_logits(t.parameter(st, "emb"), users, 6, t.parameter(st, kClassifierWeight),
                               t.parameter(st, kClassifierBias));
        return ce_loss_logits(z, y);
    };
    CHECK(gad::testing::worst(gad::testing::check_gradients(s, loss)) < 1e-6);
    auto prob_loss = [&](Tape& t, const ParameterStore& st) {
        Var p = predict_scores(t.parameter(st, "emb"), users, 6, t.parameter(st, kClassifierWeight),
                               t.parameter(st, kClassifierBias));
        const double w[] = {0.5, 2.0};
        return ce_loss(p, y, w);
    };
    CHECK(gad::testing::worst(gad::testing::check_gradients(s, prob_loss)) < 1e-6);
}

TEST_CASE("balanced weights equalize class mass") {
    const int y[] = {0, 0, 0, 0, 0, 0, 1, 1};
    const auto w = balanced_class_weights(y);
    CHECK(w[0] * 6 == doctest::Approx(4.0));
    CHECK(w[1] * 2 == doctest::Approx(4.0));
    const int one_class[] = {1, 1};
    CHECK_THROWS_AS(balanced_class_weights(one_class), DataError);
}

TEST_CASE("classifier init") {
    ParameterStore a, b;
    init_classifier(a, 9, 4);
    init_classifier(b, 9, 4);
    CHECK(a.get(kClassifierWeight) == b.get(kClassifierWeight));
    CHECK(a.get(kClassifierBias)(0, 0) == 0.0);
    for (double v : a.get(kClassifierWeight).values()) CHECK(std::abs(v) <= 1.0 / 3.0);
}
