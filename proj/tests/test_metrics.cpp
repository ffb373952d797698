#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grouprank/errors.hpp"
#include "grouprank/metrics.hpp"
#include "grouprank/spam_gen.hpp"
#include "oracles.hpp"

using namespace grouprank;
using grouprank::testing::matrix_from;
using grouprank::testing::matrix_from_dense;
using grouprank::testing::pairwise_auc;

namespace {

ReputationVector reps_of(const std::vector<double>& values) {
    ReputationVector r;
    r.score = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
    r.tiebreak = Eigen::VectorXd::Zero(r.score.size());
    r.iterations = 1;
    return r;
}

std::vector<double> random_scores(std::mt19937_64& rng, std::size_t count, int distinct = 0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> d(0, std::max(distinct - 1, 0));
    std::vector<double> out(count);
    for (auto& v : out) v = distinct > 0 ? d(rng) : u(rng);
    return out;
}

}  // namespace

TEST(RatingError, ZeroWhenUsersAgree) {
    const auto m = matrix_from_dense({{3, 4, 0}, {3, 4, 2}, {0, 4, 2}});
    const auto e = rating_error(m);
    for (Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e[i], 0.0);
}

TEST(RatingError, TwoRaterSplit) {
    const auto m = matrix_from({{"a", "o", 1}, {"b", "o", 5}});
    const auto e = rating_error(m);
    EXPECT_DOUBLE_EQ(e[0], 2.0);
    EXPECT_DOUBLE_EQ(e[1], 2.0);
    EXPECT_DOUBLE_EQ(object_mean_ratings(m)[0], 3.0);
}

TEST(RatingError, DependsOnlyOnRatedObjects) {
    // Changing ratings on an object u0 never rated leaves delta_0 alone.
    const auto a = matrix_from_dense({{3, 4, 0}, {1, 2, 5}, {5, 4, 1}});
    const auto b = matrix_from_dense({{3, 4, 0}, {1, 2, 1}, {5, 4, 3}});
    EXPECT_DOUBLE_EQ(rating_error(a)[0], rating_error(b)[0]);
}

TEST(RatingError, NoRatingsIsNaN) {
    const auto m = matrix_from_dense({{3, 4}, {0, 0}});
    EXPECT_TRUE(std::isnan(rating_error(m)[1]));
}

TEST(Recall, HalfFound) {
    std::vector<double> scores(100, 1.0);
    std::vector<Index> spammers;
    for (Index i = 0; i < 50; ++i) spammers.push_back(i);
    // 25 spammers and 25 honest users at the bottom.
    for (Index i = 0; i < 25; ++i) scores[static_cast<std::size_t>(i)] = 0.1;
    for (Index i = 50; i < 75; ++i) scores[static_cast<std::size_t>(i)] = 0.2;
    EXPECT_DOUBLE_EQ(*recall_at(reps_of(scores), spammers, 50), 0.5);
    EXPECT_DOUBLE_EQ(*recall_at(reps_of(scores), spammers, 0), 0.0);
    EXPECT_DOUBLE_EQ(*recall_at(reps_of(scores), spammers, 100), 1.0);
}

TEST(Recall, NoSpammersIsEmpty) {
    EXPECT_FALSE(recall_at(reps_of({1, 2, 3}), {}, 2).has_value());
}

TEST(Recall, CurveNondecreasingAndMonotoneInvariant) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto scores = random_scores(rng, 80, trial % 2 ? 6 : 0);
        const auto spam = Rng(static_cast<std::uint64_t>(trial)).sample(80, 15);
        std::vector<Index> sorted(spam.begin(), spam.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<Index> lengths(81);
        std::iota(lengths.begin(), lengths.end(), 0);
        const auto curve = *recall_curve(reps_of(scores), sorted, lengths);
        for (std::size_t l = 1; l < curve.size(); ++l) EXPECT_GE(curve[l], curve[l - 1]);
        EXPECT_DOUBLE_EQ(curve.back(), 1.0);
        std::vector<double> transformed(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) transformed[i] = std::exp(3.0 * scores[i]) - 7.0;
        EXPECT_EQ(*recall_curve(reps_of(transformed), sorted, lengths), curve);
    }
}

TEST(Auc, PerfectSeparation) {
    const std::vector<Index> spam{0, 1};
    EXPECT_DOUBLE_EQ(*auc(reps_of({0.1, 0.2, 0.5, 0.9}), spam), 1.0);
    EXPECT_DOUBLE_EQ(*auc(reps_of({0.9, 0.8, 0.5, 0.1}), spam), 0.0);
}

TEST(Auc, AllTiesIsHalf) {
    EXPECT_DOUBLE_EQ(*auc(reps_of({2, 2, 2, 2, 2}), std::vector<Index>{1, 3}), 0.5);
}

TEST(Auc, MixedPairs) {
    // spammers {0.1, 0.5} vs honest {0.3}: one win, one loss.
    EXPECT_DOUBLE_EQ(*auc(reps_of({0.1, 0.3, 0.5}), std::vector<Index>{0, 2}), 0.5);
}

TEST(Auc, EmptyClassIsEmpty) {
    EXPECT_FALSE(auc(reps_of({1, 2}), {}).has_value());
    EXPECT_FALSE(auc(reps_of({1, 2}), std::vector<Index>{0, 1}).has_value());
}

TEST(Auc, DegenerateAndExcludedUsers) {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // Spammer at 0.5 beats the infinite honest user, ties none; NaN user ignored.
    EXPECT_DOUBLE_EQ(*auc(reps_of({0.5, inf, nan}), std::vector<Index>{0}), 1.0);
    EXPECT_DOUBLE_EQ(*auc(reps_of({inf, inf, 0.2}), std::vector<Index>{0}), 0.5 * 0.5 + 0.5 * 0.0);
}

TEST(Auc, MatchesPairwiseOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 5 + static_cast<std::size_t>(trial % 40);
        const auto scores = random_scores(rng, m, trial % 3 ? 4 : 0);
        const auto spam = Rng(static_cast<std::uint64_t>(trial)).sample(static_cast<Index>(m), 1 + trial % 4);
        std::vector<bool> flag(m, false);
        for (Index s : spam) flag[static_cast<std::size_t>(s)] = true;
        const double expected = pairwise_auc(scores, flag);
        EXPECT_NEAR(*auc(reps_of(scores), spam), expected, 1e-12);
        std::vector<double> shifted(scores);
        for (auto& v : shifted) v = 2.0 * v + 1.0;
        EXPECT_NEAR(*auc(reps_of(shifted), spam), expected, 1e-12);
    }
}

TEST(Auc, RandomReputationsNearHalf) {
    std::mt19937_64 rng(8);
    double total = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const auto scores = random_scores(rng, 993);
        const auto spam = Rng(1000 + static_cast<std::uint64_t>(t)).sample(993, 50);
        total += *auc(reps_of(scores), spam);
    }
    EXPECT_NEAR(total / trials, 0.5, 0.02);
}

TEST(Auc, SampledEstimatorWithinThreeStandardErrors) {
    std::mt19937_64 rng(9);
    auto scores = random_scores(rng, 500);
    const auto spam = Rng(10).sample(500, 40);
    for (Index s : spam) scores[static_cast<std::size_t>(s)] *= 0.6;
    const auto reps = reps_of(scores);
    const double exact = *auc(reps, spam);
    const std::int64_t n = 100000;
    const double estimate = *sampled_auc(reps, spam, n, 11);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(n));
    EXPECT_NEAR(estimate, exact, 3.0 * se);
}

TEST(BinnedRho, AffineRelationIsMinusOne) {
    std::vector<double> rep;
    Eigen::VectorXd error(40);
    for (int i = 0; i < 40; ++i) {
        error[i] = 0.1 * i;
        rep.push_back(5.0 - 0.1 * i);
    }
    for (auto norm : {Normalization::max_scale, Normalization::min_max}) {
        const auto r = binned_rho(reps_of(rep), error, 0.05, norm);
        ASSERT_TRUE(r.rho.has_value());
        EXPECT_NEAR(*r.rho, -1.0, 1e-12);
        EXPECT_EQ(r.excluded, 0);
    }
    EXPECT_NEAR(*user_rho(reps_of(rep), error).rho, -1.0, 1e-12);
}

TEST(BinnedRho, TwoBins) {
    Eigen::VectorXd error(4);
    error << 0.0, 0.01, 1.0, 0.99;
    const auto r = binned_rho(reps_of({2.0, 2.0, 1.0, 1.0}), error);
    ASSERT_EQ(r.bins.size(), 2u);
    EXPECT_NEAR(*r.rho, -1.0, 1e-12);
}

TEST(BinnedRho, SingleBinHasNoValue) {
    Eigen::VectorXd error(3);
    error << 1.0, 1.0, 1.0;
    EXPECT_FALSE(binned_rho(reps_of({1, 2, 3}), error).rho.has_value());
}

TEST(BinnedRho, ExcludesDegenerateUsers) {
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd error(4);
    error << 0.0, 1.0, 0.5, 2.0;
    const auto r = binned_rho(reps_of({3.0, 1.0, inf, std::nan("")}), error);
    EXPECT_EQ(r.excluded, 2);
    EXPECT_NEAR(*r.rho, -1.0, 1e-12);
}

TEST(Pearson, Basics) {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 4, 6, 8};
    const std::vector<double> flat{1, 1, 1, 1};
    EXPECT_NEAR(*pearson(x, y), 1.0, 1e-12);
    EXPECT_FALSE(pearson(x, flat).has_value());
}

TEST(RecallDifference, Basics) {
    MetricGrid a{{0.01, 0.02}, {0.05}, Eigen::MatrixXd::Constant(1, 2, 1.0)};
    MetricGrid b{{0.01, 0.02}, {0.05}, Eigen::MatrixXd::Constant(1, 2, 0.8)};
    EXPECT_TRUE(recall_difference(a, a).values.isZero());
    const auto d = recall_difference(a, b);
    EXPECT_NEAR(d.values(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(d.values(0, 1), 0.2, 1e-15);
    MetricGrid c{{0.01, 0.03}, {0.05}, Eigen::MatrixXd::Constant(1, 2, 0.8)};
    EXPECT_THROW(recall_difference(a, c), UsageError);
}
