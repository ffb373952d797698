#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grouprank/corr_rank.hpp"
#include "grouprank/group_rank.hpp"
#include "grouprank/metrics.hpp"
#include "grouprank/rating_matrix.hpp"
#include "grouprank/spam_gen.hpp"

namespace grouprank {

/// Which suspect-list lengths L to evaluate.
struct LengthSpec {
    enum class Policy {
        /// L = d
        spammer_count,
        /// L = 1 .. 3d
        curve,
        explicit_list,
    };
    Policy policy = Policy::spammer_count;
    std::vector<Index> lengths;

    /// "d", "curve", "a:b" (inclusive range) or "a,b,c".
    static LengthSpec parse(const std::string& text);
    std::string describe() const;
    std::vector<Index> resolve(Index spammers) const;
};

/// Inclusive arithmetic range "start:stop:step".
struct SweepAxis {
    double start = 0.01;
    double stop = 0.10;
    double step = 0.01;

    static SweepAxis parse(const std::string& text);
    std::vector<double> values() const;
};

struct ExperimentConfig {
    std::filesystem::path input;
    LoadOptions load;
    Index min_user_degree = 20;
    std::vector<Method> methods{Method::gr, Method::cr};
    SpamType spam_type = SpamType::malicious;
    /// d, or q = d/m when `spammers` is unset.
    std::optional<Index> spammers = 50;
    std::optional<double> spammer_ratio;
    /// k, or p = k/n when `degree` is unset.
    std::optional<Index> degree;
    std::optional<double> activity = 0.05;
    LengthSpec lengths;
    int realizations = 100;
    std::uint64_t seed = 42;
    CrConfig cr;
    int workers = 1;
};

/// Concrete scenario parameters for one dataset.
struct ResolvedScenario {
    Index spammers = 0;
    Index degree = 0;
    double spammer_ratio = 0.0;
    double activity = 0.0;
    std::vector<Index> lengths;
};

/// Throws ConfigError when d, k or the realization count cannot be resolved.
ResolvedScenario resolve_scenario(const ExperimentConfig& config, const RatingMatrix& matrix);

struct MethodOutcome {
    Method method = Method::gr;
    /// Recall at each resolved length.
    std::vector<double> recall;
    double auc = 0.0;
    int iterations = 0;
};

struct RealizationRecord {
    int index = 0;
    std::uint64_t seed = 0;
    std::vector<MethodOutcome> outcomes;
};

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation; 0 for a single realization.
    double stddev = 0.0;
};

struct MethodAggregate {
    Method method = Method::gr;
    std::vector<Summary> recall;
    Summary auc;
};

struct ExperimentResult {
    SpamType spam_type = SpamType::malicious;
    ResolvedScenario scenario;
    std::vector<Method> methods;
    std::uint64_t base_seed = 0;
    DatasetStats dataset;
    std::vector<RealizationRecord> realizations;
    std::vector<MethodAggregate> aggregates;

    const MethodAggregate& aggregate(Method method) const;
};

Summary summarize(const std::vector<double>& values);

/// Recomputes `aggregates` from `realizations`.
void aggregate(ExperimentResult& result);

/// Loads `config.input` and applies the degree filter. Throws IoError,
/// ParseError or RatingDomainError.
RatingMatrix prepare_dataset(const ExperimentConfig& config);

/// Realization r injects spammers with seed `config.seed + r`, runs every
/// configured method and scores it against the ground truth. Realizations are
/// spread over `config.workers` threads; results do not depend on the split.
ExperimentResult run_scenario(const RatingMatrix& matrix, const ExperimentConfig& config);
ExperimentResult run_scenario(const ExperimentConfig& config);

struct SweepCell {
    double activity = 0.0;
    double spammer_ratio = 0.0;
    ExperimentResult result;
};

struct SweepResult {
    std::vector<double> p_axis;
    std::vector<double> q_axis;
    std::vector<Method> methods;
    /// Row-major over (q, p).
    std::vector<SweepCell> cells;

    const SweepCell& cell(std::size_t q_index, std::size_t p_index) const;
    /// Mean recall at L = d.
    MetricGrid recall_grid(Method method) const;
    MetricGrid auc_grid(Method method) const;
    /// GR minus CR recall, when both methods ran.
    std::optional<MetricGrid> recall_delta() const;
};

/// One scenario per (p, q) cell with L = d. An unresolvable cell aborts the
/// sweep with a ConfigError naming it.
SweepResult run_sweep(const RatingMatrix& matrix, const ExperimentConfig& config, const SweepAxis& p_axis,
                      const SweepAxis& q_axis);

/// Runs `task(0..count-1)` on up to `workers` threads. The first failure by
/// task index is rethrown after all threads finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace grouprank
