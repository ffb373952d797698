#pragma once

#include <Eigen/Core>

#include "grouprank/group_rank.hpp"
#include "grouprank/rating_matrix.hpp"

namespace grouprank {

struct CrConfig {
    int max_iterations = 200;
    /// Stop once the largest absolute reputation change drops below this.
    double convergence_epsilon = 1e-6;
    double initial_reputation = 1.0;
    /// Negative correlations are clipped to 0. Setting this to false keeps the
    /// signed value as the reputation (weights still use max(R, 0)).
    bool clip_negative = true;

    /// Throws ConfigError on max_iterations < 1 or a non-positive epsilon.
    void validate() const;
};

/// Q_alpha = sum_i R_i a_i_alpha / sum_i R_i over the raters of alpha. Objects
/// whose raters all have zero weight fall back to the plain mean; objects
/// without raters get NaN. Negative weights are treated as zero.
Eigen::VectorXd weighted_quality(const RatingMatrix& matrix, const Eigen::VectorXd& weights);

/// Pearson correlation between user `user`'s ratings and `quality` over the
/// objects the user rated; 0 when either side has zero variance.
double user_quality_correlation(const RatingMatrix& matrix, const Eigen::VectorXd& quality, Index user);

/// Correlation-based ranking: alternate quality estimation and
/// correlation-based reputation until the reputations settle.
ReputationVector cr_rank(const RatingMatrix& matrix, const CrConfig& config = {});

}  // namespace grouprank
