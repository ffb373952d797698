#include "grouprank/corr_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grouprank/errors.hpp"

namespace grouprank {

void CrConfig::validate() const {
    if (max_iterations < 1) throw ConfigError("CR max_iterations must be at least 1");
    if (!(convergence_epsilon > 0.0)) throw ConfigError("CR convergence epsilon must be positive");
}

Eigen::VectorXd weighted_quality(const RatingMatrix& matrix, const Eigen::VectorXd& weights) {
    if (weights.size() != matrix.users()) throw UsageError("weight vector length differs from user count");
    const auto& columns = matrix.by_object();
    Eigen::VectorXd quality(matrix.objects());
    for (Index a = 0; a < matrix.objects(); ++a) {
        double weighted = 0.0;
        double total = 0.0;
        double plain = 0.0;
        Index raters = 0;
        for (RatingMatrix::ObjectMajor::InnerIterator it(columns, a); it; ++it) {
            const double w = std::max(weights[it.row()], 0.0);
            weighted += w * it.value();
            total += w;
            plain += it.value();
            ++raters;
        }
        if (raters == 0)
            quality[a] = std::numeric_limits<double>::quiet_NaN();
        else if (total > 0.0)
            quality[a] = weighted / total;
        else
            quality[a] = plain / static_cast<double>(raters);
    }
    return quality;
}

double user_quality_correlation(const RatingMatrix& matrix, const Eigen::VectorXd& quality, Index user) {
    const auto& rows = matrix.by_user();
    const Index k = matrix.user_degree(user);
    if (k < 2) return 0.0;
    double mean_r = 0.0;
    double mean_q = 0.0;
    for (RatingMatrix::UserMajor::InnerIterator it(rows, user); it; ++it) {
        mean_r += it.value();
        mean_q += quality[it.col()];
    }
    mean_r /= static_cast<double>(k);
    mean_q /= static_cast<double>(k);
    double cov = 0.0;
    double var_r = 0.0;
    double var_q = 0.0;
    for (RatingMatrix::UserMajor::InnerIterator it(rows, user); it; ++it) {
        const double dr = it.value() - mean_r;
        const double dq = quality[it.col()] - mean_q;
        cov += dr * dq;
        var_r += dr * dr;
        var_q += dq * dq;
    }
    if (var_r <= 0.0 || var_q <= 0.0) return 0.0;
    return std::clamp(cov / std::sqrt(var_r * var_q), -1.0, 1.0);
}

ReputationVector cr_rank(const RatingMatrix& matrix, const CrConfig& config) {
    config.validate();
    const Index m = matrix.users();
    ReputationVector reps;
    reps.method = Method::cr;
    reps.score = Eigen::VectorXd::Constant(m, config.initial_reputation);
    reps.tiebreak = Eigen::VectorXd::Zero(m);

    Eigen::VectorXd next(m);
    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        const Eigen::VectorXd quality = weighted_quality(matrix, reps.score);
        for (Index i = 0; i < m; ++i) {
            const double r = user_quality_correlation(matrix, quality, i);
            next[i] = config.clip_negative ? std::max(r, 0.0) : r;
        }
        const double change = m > 0 ? (next - reps.score).cwiseAbs().maxCoeff() : 0.0;
        reps.score.swap(next);
        reps.iterations = iteration;
        if (change < config.convergence_epsilon) break;
    }
    for (Index i = 0; i < m; ++i)
        if (matrix.user_degree(i) == 0) reps.score[i] = std::numeric_limits<double>::quiet_NaN();
    return reps;
}

}  // namespace grouprank
