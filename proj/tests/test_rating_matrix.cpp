#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grouprank/errors.hpp"
#include "grouprank/rating_matrix.hpp"

using namespace grouprank;
using grouprank::testing::matrix_from;
using grouprank::testing::random_matrix;

namespace {

LoadReport load_text(const std::string& text, LoadOptions options = {}) {
    std::istringstream in(text);
    return load_ratings(in, options);
}

}  // namespace

TEST(LoadRatings, CountsUsersObjectsRatings) {
    const auto report = load_text("u1\to1\t5\nu1\to2\t3\nu2\to1\t1\n");
    EXPECT_EQ(report.matrix.users(), 2);
    EXPECT_EQ(report.matrix.objects(), 2);
    EXPECT_EQ(report.matrix.ratings(), 3);
    EXPECT_EQ(report.duplicates, 0u);
}

TEST(LoadRatings, EmptySource) {
    const auto report = load_text("");
    EXPECT_EQ(report.matrix.users(), 0);
    EXPECT_EQ(report.matrix.objects(), 0);
    EXPECT_EQ(report.matrix.ratings(), 0);
    const auto s = stats(report.matrix);
    EXPECT_EQ(s.sparsity, 0.0);
    EXPECT_EQ(s.mean_user_degree, 0.0);
}

TEST(LoadRatings, CommaSeparatedWithHeaderAndExtraColumns) {
    const auto report = load_text("userId,movieId,rating,timestamp\n1,10,4,964982703\n2,10,5,964981247\n");
    EXPECT_TRUE(report.header_skipped);
    EXPECT_EQ(report.matrix.users(), 2);
    EXPECT_EQ(report.matrix.ratings(), 2);
}

TEST(LoadRatings, ExplicitDelimiterAndIntegralDecimals) {
    LoadOptions options;
    options.delimiter = Delimiter::comma;
    const auto report = load_text("a,x,4.0\nb,x,2\n", options);
    EXPECT_EQ(report.matrix.by_user().coeff(0, 0), 4);
}

TEST(LoadRatings, LastDuplicateWins) {
    const auto report = load_text("u1\to1\t5\nu1\to1\t2\n");
    EXPECT_EQ(report.duplicates, 1u);
    EXPECT_EQ(report.matrix.ratings(), 1);
    EXPECT_EQ(report.matrix.by_user().coeff(0, 0), 2);
}

TEST(LoadRatings, MalformedRecordReportsLine) {
    try {
        load_text("u1\to1\t5\nu2\to2\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& err) {
        EXPECT_EQ(err.line(), 2u);
    }
    EXPECT_THROW(load_text("u1\to1\t5\nu2\to2\tbad\n"), ParseError);
}

TEST(LoadRatings, RatingOutsideScale) {
    try {
        load_text("u1\to1\t6\n");
        FAIL() << "expected RatingDomainError";
    } catch (const RatingDomainError& err) {
        EXPECT_NE(std::string(err.what()).find('6'), std::string::npos);
    }
    EXPECT_THROW(load_text("u1\to1\t3.5\n"), RatingDomainError);
    LoadOptions ten_point;
    ten_point.scale = RatingScale::range(1, 10);
    EXPECT_NO_THROW(load_text("u1\to1\t9\n", ten_point));
}

TEST(LoadRatings, NaturalIdentifierOrder) {
    const auto report = load_text("10\ta\t1\n9\ta\t2\nx\ta\t3\n");
    const auto ids = report.matrix.user_ids();
    ASSERT_EQ(ids.size(), 3u);
    EXPECT_EQ(ids[0], "9");
    EXPECT_EQ(ids[1], "10");
    EXPECT_EQ(ids[2], "x");
}

TEST(LoadRatings, OrderInsensitive) {
    std::mt19937_64 rng(7);
    std::vector<std::string> lines;
    for (int u = 0; u < 30; ++u)
        for (int o = 0; o < 12; ++o)
            if ((u * 7 + o * 3) % 4 != 0) lines.push_back(std::to_string(u) + "\t" + std::to_string(o) + "\t" +
                                                          std::to_string(1 + (u + o) % 5));
    const auto join = [](const std::vector<std::string>& ls) {
        std::string text;
        for (const auto& l : ls) text += l + "\n";
        return text;
    };
    const auto reference = load_text(join(lines)).matrix;
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(lines.begin(), lines.end(), rng);
        EXPECT_EQ(load_text(join(lines)).matrix, reference);
    }
}

TEST(RatingMatrix, RejectsRepeatedPairsAndForeignRatings) {
    const std::vector<RatingEntry> repeated{{0, 0, 1}, {0, 0, 2}};
    EXPECT_THROW(RatingMatrix({"u"}, {"o"}, repeated), UsageError);
    const std::vector<RatingEntry> foreign{{0, 0, 9}};
    EXPECT_THROW(RatingMatrix({"u"}, {"o"}, foreign), RatingDomainError);
}

TEST(RatingMatrix, DegreesSumToRatingCount) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_matrix(rng, 15, 9, RatingScale{}, 0.4);
        EXPECT_EQ(m.user_degrees().sum(), m.ratings());
        EXPECT_EQ(m.object_degrees().sum(), m.ratings());
    }
}

TEST(Stats, ArithmeticOnSmallMatrix) {
    const auto m = matrix_from({{"u1", "o1", 5}, {"u1", "o2", 3}, {"u2", "o1", 1}});
    const auto s = stats(m);
    EXPECT_DOUBLE_EQ(s.mean_user_degree, 1.5);
    EXPECT_DOUBLE_EQ(s.mean_object_degree, 1.5);
    EXPECT_DOUBLE_EQ(s.sparsity, 0.75);
}

TEST(Stats, CompleteBipartite) {
    const auto m = matrix_from({{"u1", "o1", 5}, {"u1", "o2", 3}, {"u2", "o1", 1}, {"u2", "o2", 2}});
    EXPECT_DOUBLE_EQ(stats(m).sparsity, 1.0);
}

TEST(FilterCore, NoOpWhenEveryUserQualifies) {
    std::mt19937_64 rng(3);
    const auto m = random_matrix(rng, 10, 40, RatingScale{}, 0.2, 20);
    EXPECT_EQ(filter_core(m, 20), m);
}

TEST(FilterCore, DropsLowDegreeUsersAndTheirExclusiveObjects) {
    std::vector<std::tuple<std::string, std::string, Rating>> t;
    for (int o = 0; o < 25; ++o) t.emplace_back("heavy", "o" + std::to_string(o), 4);
    for (int o = 25; o < 30; ++o) t.emplace_back("light", "o" + std::to_string(o), 2);
    const auto filtered = filter_core(matrix_from(t), 20);
    EXPECT_EQ(filtered.users(), 1);
    EXPECT_EQ(filtered.user_id(0), "heavy");
    EXPECT_EQ(filtered.objects(), 25);
    EXPECT_EQ(filtered.ratings(), 25);
}

TEST(FilterCore, Idempotent) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = random_matrix(rng, 25, 30, RatingScale{}, 0.25);
        for (Index threshold : {1, 3, 7, 10}) {
            const auto once = filter_core(m, threshold);
            EXPECT_EQ(filter_core(once, threshold), once);
            for (Index i = 0; i < once.users(); ++i) EXPECT_GE(once.user_degree(i), threshold);
            for (Index a = 0; a < once.objects(); ++a) EXPECT_GE(once.object_degree(a), 1);
        }
    }
}

TEST(FilterCore, RejectsZeroThreshold) {
    EXPECT_THROW(filter_core(RatingMatrix{}, 0), UsageError);
}
