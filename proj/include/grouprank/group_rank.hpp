#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "grouprank/rating_matrix.hpp"

namespace grouprank {

enum class Method { gr, cr };

std::string_view to_string(Method method) noexcept;
/// Accepts "gr" / "cr" in any case; throws ConfigError otherwise.
Method parse_method(std::string_view text);

/// Per-user reputations produced by one of the ranking methods.
///
/// `score[i]` is R_i. Two markers sit outside the finite range:
///  - +infinity: zero dispersion (all of the user's rewardings equal). Such
///    users rank above every finite reputation; among themselves they are
///    ordered by `tiebreak` (the mean rewarding for GR).
///  - NaN: the user has no ratings and is left out of rankings and metrics.
struct ReputationVector {
    Method method = Method::gr;
    Eigen::VectorXd score;
    Eigen::VectorXd tiebreak;
    /// Fixed-point iterations performed (CR); 1 for the single-pass GR.
    int iterations = 0;

    Index size() const noexcept { return score.size(); }
    bool degenerate(Index user) const;
    bool excluded(Index user) const;
};

/// Group sizes Lambda(s, alpha) and rating-rewarding values Lambda*(s, alpha).
///
/// Stored densely as z x n (z = scale size); a zero size means the group is
/// empty and its reward is reported as 0.
class GroupRewardTable {
public:
    GroupRewardTable() = default;
    GroupRewardTable(Eigen::MatrixXi sizes, std::uint64_t source_fingerprint);

    Index levels() const noexcept { return sizes_.rows(); }
    Index objects() const noexcept { return sizes_.cols(); }

    int size(Index level, Index object) const { return sizes_(level, object); }
    double reward(Index level, Index object) const;

    const Eigen::MatrixXi& sizes() const noexcept { return sizes_; }
    const Eigen::VectorXi& object_degrees() const noexcept { return degrees_; }
    /// Lambda* as a dense z x n matrix.
    Eigen::MatrixXd rewards() const;

    std::uint64_t source_fingerprint() const noexcept { return source_; }

private:
    Eigen::MatrixXi sizes_;
    Eigen::VectorXi degrees_;
    std::uint64_t source_ = 0;
};

/// A' : same sparsity pattern as the rating matrix, each rating replaced by
/// the share of the object's raters who gave that same rating.
using RewardingMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

GroupRewardTable group_sizes(const RatingMatrix& matrix);

/// Throws UsageError when `table` was not built from `matrix`.
RewardingMatrix rewarding_matrix(const RatingMatrix& matrix, const GroupRewardTable& table);

/// R_i = mu(A'_i) / sigma(A'_i), population standard deviation.
ReputationVector reputations(const RewardingMatrix& rewards);

/// group_sizes -> rewarding_matrix -> reputations.
ReputationVector gr_rank(const RatingMatrix& matrix);

/// Users in ascending reputation order (most suspicious first). Finite scores
/// come first, ties broken by user index; degenerate users follow, ordered by
/// `tiebreak` then index. Excluded users are omitted.
std::vector<Index> ascending_order(const ReputationVector& reps);

/// The `count` most suspicious users. A count above the number of ranked
/// users is clamped with a warning.
std::vector<Index> rank_suspects(const ReputationVector& reps, Index count);

}  // namespace grouprank
