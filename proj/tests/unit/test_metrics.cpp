#include <doctest.h>

#include <random>
#include <stdexcept>

#include "gad/metrics.hpp"
#include "test_support.hpp"

using namespace gad;
using gad::testing::brute_force_auc;

namespace {

struct Sample {
    std::vector<double> scores;
    std::vector<int> labels;
};

Sample random_sample(std::size_t n, std::uint64_t seed, int levels = 0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Sample s;
    for (std::size_t i = 0; i < n; ++i) {
        double v = u(gen);
        if (levels > 0) v = double(int(v * levels)) / levels;  // force ties
        s.scores.push_back(v);
        s.labels.push_back(i < 2 ? int(i) : (u(gen) < 0.3 ? 1 : 0));
    }
    return s;
}

}  // namespace

TEST_CASE("auc of a small hand example") {
    const double s[] = {0.1, 0.4, 0.35, 0.8};
    const int y[] = {0, 0, 1, 1};
    CHECK(auc(s, y) == doctest::Approx(0.75));
}

TEST_CASE("ties count one half") {
    const double s[] = {0.5, 0.5, 0.5, 0.5};
    const int y[] = {1, 0, 1, 0};
    CHECK(auc(s, y) == doctest::Approx(0.5));
    const double s2[] = {0.2, 0.7, 0.7};
    const int y2[] = {0, 0, 1};
    CHECK(auc(s2, y2) == doctest::Approx(0.75));
}

TEST_CASE("rank auc matches pair counting") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Sample s = random_sample(57, seed, seed % 2 ? 6 : 0);
        CHECK(auc(s.scores, s.labels) == doctest::Approx(brute_force_auc(s.scores, s.labels)).epsilon(1e-12));
    }
}

TEST_CASE("auc invariances") {
    const Sample s = random_sample(40, 3);
    const double a = auc(s.scores, s.labels);
    std::vector<double> mono, flipped;
    std::vector<int> inverted;
    for (double v : s.scores) mono.push_back(3.0 * v * v * v + 1.0);
    for (double v : s.scores) flipped.push_back(-v);
    for (int y : s.labels) inverted.push_back(1 - y);
    CHECK(auc(mono, s.labels) == doctest::Approx(a));
    CHECK(auc(flipped, s.labels) == doctest::Approx(1.0 - a));
    CHECK(auc(s.scores, inverted) == doctest::Approx(1.0 - a));
    // perfect and reversed separation
    std::vector<double> oracle;
    for (int y : s.labels) oracle.push_back(double(y));
    CHECK(auc(oracle, s.labels) == 1.0);
    CHECK(auc(oracle, inverted) == 0.0);
}

TEST_CASE("auc rejects undefined inputs") {
    const double s[] = {0.1, 0.2};
    const int same[] = {1, 1};
    const int bad[] = {0, 3};
    const int short_labels[] = {1};
    CHECK_THROWS_AS(auc(s, same), std::invalid_argument);
    CHECK_THROWS_AS(auc(s, bad), std::invalid_argument);
    CHECK_THROWS_AS(auc(s, short_labels), std::invalid_argument);
    CHECK_THROWS_AS(tpr_fpr_curve(s, same), std::invalid_argument);
}

TEST_CASE("confusion counts at a threshold") {
    const double s[] = {0.1, 0.4, 0.35, 0.8, 0.5};
    const int y[] = {0, 0, 1, 1, 0};
    const ConfusionCounts c = confusion_at_threshold(s, y, 0.4);
    CHECK(c == ConfusionCounts{1, 2, 1, 1});
    CHECK(c.total() == 5);
    CHECK(c.tpr() == doctest::Approx(0.5));
    CHECK(c.fpr() == doctest::Approx(2.0 / 3.0));
    // everything predicted positive
    const ConfusionCounts all = confusion_at_threshold(s, y, 0.0);
    CHECK(all.tpr() == 1.0);
    CHECK(all.fpr() == 1.0);
    // nothing predicted positive
    const ConfusionCounts none = confusion_at_threshold(s, y, 0.9);
    CHECK(none.tpr() == 0.0);
    CHECK(none.fpr() == 0.0);
    CHECK(ConfusionCounts{}.tpr() == 0.0);
}

TEST_CASE("roc curve endpoints, monotonicity and area") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Sample s = random_sample(35, seed + 50, seed % 3 ? 0 : 4);
        const auto curve = tpr_fpr_curve(s.scores, s.labels);
        REQUIRE(curve.size() >= 2);
        CHECK(curve.front().fpr == 0.0);
        CHECK(curve.front().tpr == 0.0);
        CHECK(curve.back().fpr == 1.0);
        CHECK(curve.back().tpr == 1.0);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].fpr >= curve[i - 1].fpr);
            CHECK(curve[i].tpr >= curve[i - 1].tpr);
        }
        // interior points agree with the confusion counts at their threshold
        for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
            const auto c = confusion_at_threshold(s.scores, s.labels, curve[i].threshold);
            CHECK(c.tpr() == doctest::Approx(curve[i].tpr));
            CHECK(c.fpr() == doctest::Approx(curve[i].fpr));
        }
        CHECK(curve_area(curve) == doctest::Approx(auc(s.scores, s.labels)).epsilon(1e-12));
    }
}
