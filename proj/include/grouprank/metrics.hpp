#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "grouprank/group_rank.hpp"
#include "grouprank/rating_matrix.hpp"

namespace grouprank {

/// Plain mean rating per object; NaN for objects nobody rated.
Eigen::VectorXd object_mean_ratings(const RatingMatrix& matrix);

/// delta_i: mean absolute deviation of user i's ratings from the mean rating
/// of each object they rated. NaN for users without ratings.
Eigen::VectorXd rating_error(const RatingMatrix& matrix);

/// Share of the true spammers found in the `length` most suspicious users.
/// Empty when there are no spammers.
std::optional<double> recall_at(const ReputationVector& reps, std::span<const Index> spammers, Index length);

/// recall_at for each requested length, sharing one ranking.
std::optional<std::vector<double>> recall_curve(const ReputationVector& reps, std::span<const Index> spammers,
                                                std::span<const Index> lengths);

/// Probability that a spammer has a strictly lower reputation than a
/// non-spammer, ties counting one half, over all spammer x non-spammer pairs.
/// Empty when either class is empty. Users excluded from the ranking are
/// ignored.
std::optional<double> auc(const ReputationVector& reps, std::span<const Index> spammers);

/// The same quantity estimated from `comparisons` random spammer/non-spammer
/// pairs.
std::optional<double> sampled_auc(const ReputationVector& reps, std::span<const Index> spammers,
                                  std::int64_t comparisons, std::uint64_t seed);

struct ErrorBin {
    double lower = 0.0;
    Index users = 0;
    double mean_error = 0.0;
    double mean_reputation = 0.0;
};

struct RhoResult {
    std::optional<double> rho;
    /// Zero-dispersion or unranked users left out of the calculation.
    Index excluded = 0;
    std::vector<ErrorBin> bins;
};

enum class Normalization {
    /// x / max|x|
    max_scale,
    /// (x - min) / (max - min)
    min_max,
};

/// Pearson correlation between rating error and reputation, after
/// normalising both and averaging within error bins of width `bin_width`.
/// Empty bins are skipped; fewer than two nonempty bins gives no value.
RhoResult binned_rho(const ReputationVector& reps, const Eigen::VectorXd& error, double bin_width = 0.05,
                     Normalization normalization = Normalization::max_scale);

/// Pearson correlation over raw per-user (error, reputation) pairs.
RhoResult user_rho(const ReputationVector& reps, const Eigen::VectorXd& error);

/// Pearson correlation of two equal-length samples; empty on zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Mean recall (or any metric) over a (q, p) grid: rows follow `q_axis`,
/// columns follow `p_axis`.
struct MetricGrid {
    std::vector<double> p_axis;
    std::vector<double> q_axis;
    Eigen::MatrixXd values;
};

/// Elementwise `gr - cr`. Throws UsageError when the axes differ.
MetricGrid recall_difference(const MetricGrid& gr, const MetricGrid& cr);

}  // namespace grouprank
