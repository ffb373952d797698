#include "grouprank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grouprank/errors.hpp"
#include "grouprank/spam_gen.hpp"

namespace grouprank {

namespace {

std::vector<char> spammer_mask(Index users, std::span<const Index> spammers) {
    std::vector<char> mask(static_cast<std::size_t>(users), 0);
    for (Index s : spammers) {
        if (s < 0 || s >= users) throw UsageError("spammer index out of range");
        mask[static_cast<std::size_t>(s)] = 1;
    }
    return mask;
}

struct Classes {
    std::vector<double> spam;
    std::vector<double> honest;
};

Classes split_scores(const ReputationVector& reps, std::span<const Index> spammers) {
    const auto mask = spammer_mask(reps.size(), spammers);
    Classes c;
    for (Index i = 0; i < reps.size(); ++i) {
        if (reps.excluded(i)) continue;
        (mask[static_cast<std::size_t>(i)] ? c.spam : c.honest).push_back(reps.score[i]);
    }
    return c;
}

std::pair<double, double> min_max(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

}  // namespace

Eigen::VectorXd object_mean_ratings(const RatingMatrix& matrix) {
    const auto& columns = matrix.by_object();
    Eigen::VectorXd mean(matrix.objects());
    for (Index a = 0; a < matrix.objects(); ++a) {
        double sum = 0.0;
        for (RatingMatrix::ObjectMajor::InnerIterator it(columns, a); it; ++it) sum += it.value();
        const Index k = matrix.object_degree(a);
        mean[a] = k > 0 ? sum / static_cast<double>(k) : std::numeric_limits<double>::quiet_NaN();
    }
    return mean;
}

Eigen::VectorXd rating_error(const RatingMatrix& matrix) {
    const Eigen::VectorXd quality = object_mean_ratings(matrix);
    const auto& rows = matrix.by_user();
    Eigen::VectorXd error(matrix.users());
    for (Index i = 0; i < matrix.users(); ++i) {
        double sum = 0.0;
        for (RatingMatrix::UserMajor::InnerIterator it(rows, i); it; ++it)
            sum += std::abs(it.value() - quality[it.col()]);
        const Index k = matrix.user_degree(i);
        error[i] = k > 0 ? sum / static_cast<double>(k) : std::numeric_limits<double>::quiet_NaN();
    }
    return error;
}

std::optional<std::vector<double>> recall_curve(const ReputationVector& reps, std::span<const Index> spammers,
                                                std::span<const Index> lengths) {
    const auto mask = spammer_mask(reps.size(), spammers);
    const auto total = std::count(mask.begin(), mask.end(), 1);
    if (total == 0) return std::nullopt;

    const auto order = ascending_order(reps);
    // hits[L] = spammers among the first L ranked users.
    std::vector<Index> hits(order.size() + 1, 0);
    for (std::size_t r = 0; r < order.size(); ++r)
        hits[r + 1] = hits[r] + mask[static_cast<std::size_t>(order[r])];

    std::vector<double> curve;
    curve.reserve(lengths.size());
    for (Index length : lengths) {
        if (length < 0) throw UsageError("suspect list length must be non-negative");
        const auto clamped = std::min(static_cast<std::size_t>(length), order.size());
        curve.push_back(static_cast<double>(hits[clamped]) / static_cast<double>(total));
    }
    return curve;
}

std::optional<double> recall_at(const ReputationVector& reps, std::span<const Index> spammers, Index length) {
    const Index lengths[] = {length};
    auto curve = recall_curve(reps, spammers, lengths);
    if (!curve) return std::nullopt;
    return curve->front();
}

std::optional<double> auc(const ReputationVector& reps, std::span<const Index> spammers) {
    auto classes = split_scores(reps, spammers);
    if (classes.spam.empty() || classes.honest.empty()) return std::nullopt;
    std::sort(classes.honest.begin(), classes.honest.end());
    double wins = 0.0;
    for (double s : classes.spam) {
        const auto lower = std::lower_bound(classes.honest.begin(), classes.honest.end(), s);
        const auto upper = std::upper_bound(lower, classes.honest.end(), s);
        wins += static_cast<double>(classes.honest.end() - upper) + 0.5 * static_cast<double>(upper - lower);
    }
    return wins / (static_cast<double>(classes.spam.size()) * static_cast<double>(classes.honest.size()));
}

std::optional<double> sampled_auc(const ReputationVector& reps, std::span<const Index> spammers,
                                  std::int64_t comparisons, std::uint64_t seed) {
    if (comparisons < 1) throw UsageError("AUC sampling needs at least one comparison");
    const auto classes = split_scores(reps, spammers);
    if (classes.spam.empty() || classes.honest.empty()) return std::nullopt;
    Rng rng(seed);
    double wins = 0.0;
    for (std::int64_t c = 0; c < comparisons; ++c) {
        const double s = classes.spam[rng.below(classes.spam.size())];
        const double h = classes.honest[rng.below(classes.honest.size())];
        wins += s < h ? 1.0 : (s == h ? 0.5 : 0.0);
    }
    return wins / static_cast<double>(comparisons);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("pearson: sample lengths differ");
    if (x.size() < 2) return std::nullopt;
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        mx += x[j];
        my += y[j];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        sxy += (x[j] - mx) * (y[j] - my);
        sxx += (x[j] - mx) * (x[j] - mx);
        syy += (y[j] - my) * (y[j] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

struct Paired {
    std::vector<double> error;
    std::vector<double> reputation;
    Index excluded = 0;
};

Paired eligible_pairs(const ReputationVector& reps, const Eigen::VectorXd& error) {
    if (error.size() != reps.size()) throw UsageError("rating error and reputation lengths differ");
    Paired p;
    for (Index i = 0; i < reps.size(); ++i) {
        if (!std::isfinite(reps.score[i]) || !std::isfinite(error[i])) {
            ++p.excluded;
            continue;
        }
        p.error.push_back(error[i]);
        p.reputation.push_back(reps.score[i]);
    }
    return p;
}

}  // namespace

RhoResult user_rho(const ReputationVector& reps, const Eigen::VectorXd& error) {
    const auto p = eligible_pairs(reps, error);
    RhoResult out;
    out.excluded = p.excluded;
    out.rho = pearson(p.error, p.reputation);
    return out;
}

RhoResult binned_rho(const ReputationVector& reps, const Eigen::VectorXd& error, double bin_width,
                     Normalization normalization) {
    if (!(bin_width > 0.0 && bin_width <= 1.0)) throw UsageError("bin width must lie in (0, 1]");
    auto p = eligible_pairs(reps, error);
    RhoResult out;
    out.excluded = p.excluded;
    if (p.error.size() < 2) return out;

    const auto [emin, emax] = min_max(p.error);
    const auto [rmin, rmax] = min_max(p.reputation);
    if (!(emax > emin) || !(rmax > rmin)) return out;
    // Affine map x -> (x - offset) / span onto the unit interval.
    const auto unit_map = [normalization](double lo, double hi) -> std::pair<double, double> {
        if (normalization == Normalization::min_max) return {lo, hi - lo};
        return {0.0, std::max(std::abs(lo), std::abs(hi))};
    };
    const auto [e_offset, e_span] = unit_map(emin, emax);
    const auto [r_offset, r_span] = unit_map(rmin, rmax);

    const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
    std::vector<ErrorBin> acc(bins);
    for (std::size_t b = 0; b < bins; ++b) acc[b].lower = static_cast<double>(b) * bin_width;
    for (std::size_t j = 0; j < p.error.size(); ++j) {
        const double e = (p.error[j] - e_offset) / e_span;
        const double r = (p.reputation[j] - r_offset) / r_span;
        const auto b = std::min(bins - 1, static_cast<std::size_t>(std::floor(std::max(e, 0.0) / bin_width)));
        acc[b].users += 1;
        acc[b].mean_error += e;
        acc[b].mean_reputation += r;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto& bin : acc) {
        if (bin.users == 0) continue;
        bin.mean_error /= static_cast<double>(bin.users);
        bin.mean_reputation /= static_cast<double>(bin.users);
        xs.push_back(bin.mean_error);
        ys.push_back(bin.mean_reputation);
        out.bins.push_back(bin);
    }
    if (out.bins.size() >= 2) out.rho = pearson(xs, ys);
    return out;
}

MetricGrid recall_difference(const MetricGrid& gr, const MetricGrid& cr) {
    if (gr.p_axis != cr.p_axis || gr.q_axis != cr.q_axis || gr.values.rows() != cr.values.rows() ||
        gr.values.cols() != cr.values.cols())
        throw UsageError("recall grids do not share the same (p, q) axes");
    return {gr.p_axis, gr.q_axis, gr.values - cr.values};
}

}  // namespace grouprank
