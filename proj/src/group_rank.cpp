#include "grouprank/group_rank.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <spdlog/spdlog.h>

#include "grouprank/errors.hpp"

namespace grouprank {

std::string_view to_string(Method method) noexcept {
    return method == Method::gr ? "GR" : "CR";
}

Method parse_method(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "gr") return Method::gr;
    if (lower == "cr") return Method::cr;
    throw ConfigError("unknown method '" + std::string(text) + "' (expected gr or cr)");
}

bool ReputationVector::degenerate(Index user) const {
    return std::isinf(score[user]);
}

bool ReputationVector::excluded(Index user) const {
    return std::isnan(score[user]);
}

GroupRewardTable::GroupRewardTable(Eigen::MatrixXi sizes, std::uint64_t source_fingerprint)
    : sizes_(std::move(sizes)), degrees_(sizes_.colwise().sum().transpose()), source_(source_fingerprint) {}

double GroupRewardTable::reward(Index level, Index object) const {
    const int group = sizes_(level, object);
    return group == 0 ? 0.0 : static_cast<double>(group) / static_cast<double>(degrees_[object]);
}

Eigen::MatrixXd GroupRewardTable::rewards() const {
    Eigen::MatrixXd out(levels(), objects());
    for (Index a = 0; a < objects(); ++a)
        for (Index s = 0; s < levels(); ++s) out(s, a) = reward(s, a);
    return out;
}

GroupRewardTable group_sizes(const RatingMatrix& matrix) {
    const auto& scale = matrix.scale();
    Eigen::MatrixXi sizes = Eigen::MatrixXi::Zero(static_cast<Index>(scale.size()), matrix.objects());
    const auto& columns = matrix.by_object();
    for (Index a = 0; a < matrix.objects(); ++a)
        for (RatingMatrix::ObjectMajor::InnerIterator it(columns, a); it; ++it)
            ++sizes(static_cast<Index>(*scale.index_of(it.value())), a);
    return GroupRewardTable(std::move(sizes), matrix.fingerprint());
}

RewardingMatrix rewarding_matrix(const RatingMatrix& matrix, const GroupRewardTable& table) {
    if (table.source_fingerprint() != matrix.fingerprint())
        throw UsageError("group table was built from a different rating matrix");
    const auto& scale = matrix.scale();
    const auto& rows = matrix.by_user();
    RewardingMatrix rewards(matrix.users(), matrix.objects());
    rewards.reserve(Eigen::VectorXi(matrix.user_degrees()));
    for (Index i = 0; i < matrix.users(); ++i)
        for (RatingMatrix::UserMajor::InnerIterator it(rows, i); it; ++it)
            rewards.insert(i, it.col()) = table.reward(static_cast<Index>(*scale.index_of(it.value())), it.col());
    rewards.makeCompressed();
    return rewards;
}

ReputationVector reputations(const RewardingMatrix& input) {
    // The row walk below reads the compressed storage directly.
    RewardingMatrix compressed;
    if (!input.isCompressed()) {
        compressed = input;
        compressed.makeCompressed();
    }
    const RewardingMatrix& rewards = input.isCompressed() ? input : compressed;
    ReputationVector reps;
    reps.method = Method::gr;
    reps.iterations = 1;
    reps.score.resize(rewards.rows());
    reps.tiebreak = Eigen::VectorXd::Zero(rewards.rows());
    Index missing = 0;
    for (Index i = 0; i < rewards.rows(); ++i) {
        const Index begin = rewards.outerIndexPtr()[i];
        const Index k = rewards.outerIndexPtr()[i + 1] - begin;
        if (k == 0) {
            reps.score[i] = std::numeric_limits<double>::quiet_NaN();
            ++missing;
            continue;
        }
        const Eigen::Map<const Eigen::VectorXd> row(rewards.valuePtr() + begin, k);
        const double mu = row.mean();
        reps.tiebreak[i] = mu;
        if (row.minCoeff() == row.maxCoeff()) {
            reps.score[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        const double sigma = std::sqrt((row.array() - mu).square().sum() / static_cast<double>(k));
        reps.score[i] = mu / sigma;
    }
    if (missing > 0) spdlog::warn("{} users without ratings left out of the reputation ranking", missing);
    return reps;
}

ReputationVector gr_rank(const RatingMatrix& matrix) {
    return reputations(rewarding_matrix(matrix, group_sizes(matrix)));
}

std::vector<Index> ascending_order(const ReputationVector& reps) {
    std::vector<Index> order;
    order.reserve(static_cast<std::size_t>(reps.size()));
    for (Index i = 0; i < reps.size(); ++i)
        if (!reps.excluded(i)) order.push_back(i);
    const auto key_tiebreak = [&](Index i) {
        return reps.tiebreak.size() == reps.size() ? reps.tiebreak[i] : 0.0;
    };
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double sa = reps.score[a];
        const double sb = reps.score[b];
        if (sa != sb) return sa < sb;
        if (std::isinf(sa)) {
            const double ta = key_tiebreak(a);
            const double tb = key_tiebreak(b);
            if (ta != tb) return ta < tb;
        }
        return a < b;
    });
    return order;
}

std::vector<Index> rank_suspects(const ReputationVector& reps, Index count) {
    if (count < 0) throw UsageError("suspect list length must be non-negative");
    auto order = ascending_order(reps);
    if (count > static_cast<Index>(order.size())) {
        spdlog::warn("suspect list length {} exceeds {} ranked users; clamped", count, order.size());
        count = static_cast<Index>(order.size());
    }
    order.resize(static_cast<std::size_t>(count));
    return order;
}

}  // namespace grouprank
