#include "grouprank/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "grouprank/errors.hpp"

namespace grouprank {

namespace {

Index parse_count(const std::string& text) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + text + "' is not a count");
    }
    if (used != text.size() || value < 0) throw ConfigError("'" + text + "' is not a count");
    return static_cast<Index>(value);
}

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + text + "' is not a number");
    }
    if (used != text.size()) throw ConfigError("'" + text + "' is not a number");
    return value;
}

std::vector<std::string> split_on(const std::string& text, char delimiter) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, delimiter)) parts.push_back(part);
    return parts;
}

RealizationRecord run_realization(const RatingMatrix& matrix, const ExperimentConfig& config,
                                  const ResolvedScenario& scenario, int index) {
    RealizationRecord record;
    record.index = index;
    record.seed = config.seed + static_cast<std::uint64_t>(index);
    const auto injected =
        inject_spammers(matrix, {config.spam_type, scenario.spammers, scenario.degree, record.seed});
    for (Method method : config.methods) {
        const auto reps = method == Method::gr ? gr_rank(injected.matrix) : cr_rank(injected.matrix, config.cr);
        MethodOutcome outcome;
        outcome.method = method;
        outcome.recall = recall_curve(reps, injected.spammers, scenario.lengths).value();
        outcome.auc = auc(reps, injected.spammers).value_or(std::nan(""));
        outcome.iterations = reps.iterations;
        record.outcomes.push_back(std::move(outcome));
    }
    return record;
}

ExperimentResult empty_result(const RatingMatrix& matrix, const ExperimentConfig& config,
                              ResolvedScenario scenario) {
    ExperimentResult result;
    result.spam_type = config.spam_type;
    result.scenario = std::move(scenario);
    result.methods = config.methods;
    result.base_seed = config.seed;
    result.dataset = stats(matrix);
    result.realizations.resize(static_cast<std::size_t>(config.realizations));
    return result;
}

void check_methods(const ExperimentConfig& config) {
    if (config.methods.empty()) throw ConfigError("no ranking method selected");
    if (config.realizations < 1) throw ConfigError("realizations must be at least 1");
    if (config.workers < 1) throw ConfigError("workers must be at least 1");
    config.cr.validate();
}

}  // namespace

LengthSpec LengthSpec::parse(const std::string& text) {
    LengthSpec spec;
    if (text == "d") return spec;
    if (text == "curve") {
        spec.policy = Policy::curve;
        return spec;
    }
    spec.policy = Policy::explicit_list;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const Index first = parse_count(text.substr(0, colon));
        const Index last = parse_count(text.substr(colon + 1));
        if (last < first) throw ConfigError("empty length range '" + text + "'");
        for (Index length = first; length <= last; ++length) spec.lengths.push_back(length);
        return spec;
    }
    for (const auto& part : split_on(text, ',')) spec.lengths.push_back(parse_count(part));
    if (spec.lengths.empty()) throw ConfigError("no suspect-list length given");
    return spec;
}

std::string LengthSpec::describe() const {
    switch (policy) {
    case Policy::spammer_count:
        return "d";
    case Policy::curve:
        return "curve";
    case Policy::explicit_list:
        break;
    }
    std::string out;
    for (Index length : lengths) out += (out.empty() ? "" : ",") + std::to_string(length);
    return out;
}

std::vector<Index> LengthSpec::resolve(Index spammers) const {
    switch (policy) {
    case Policy::spammer_count:
        return {spammers};
    case Policy::curve: {
        std::vector<Index> out(static_cast<std::size_t>(3 * spammers));
        std::iota(out.begin(), out.end(), Index{1});
        return out;
    }
    case Policy::explicit_list:
        break;
    }
    return lengths;
}

SweepAxis SweepAxis::parse(const std::string& text) {
    const auto parts = split_on(text, ':');
    if (parts.size() != 3) throw ConfigError("range '" + text + "' is not start:stop:step");
    SweepAxis axis{parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
    if (!(axis.step > 0.0) || axis.stop < axis.start) throw ConfigError("range '" + text + "' is empty");
    return axis;
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long j = 0; j < count; ++j) {
        // Round to 12 decimals so 0.01 * 7 prints as 0.07.
        const double v = start + static_cast<double>(j) * step;
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

ResolvedScenario resolve_scenario(const ExperimentConfig& config, const RatingMatrix& matrix) {
    ResolvedScenario s;
    const Index m = matrix.users();
    const Index n = matrix.objects();
    if (m == 0 || n == 0) throw ConfigError("filtered dataset is empty");
    if (config.spammers)
        s.spammers = *config.spammers;
    else if (config.spammer_ratio)
        s.spammers = spammers_for_ratio(*config.spammer_ratio, m);
    else
        throw ConfigError("neither d nor q given");
    if (config.degree)
        s.degree = *config.degree;
    else if (config.activity)
        s.degree = degree_for_activity(*config.activity, n);
    else
        throw ConfigError("neither k nor p given");
    if (s.spammers < 1 || s.spammers > m)
        throw ConfigError("d=" + std::to_string(s.spammers) + " outside [1, " + std::to_string(m) + "]");
    if (s.degree < 1 || s.degree > n)
        throw ConfigError("k=" + std::to_string(s.degree) + " outside [1, " + std::to_string(n) + "]");
    s.spammer_ratio = static_cast<double>(s.spammers) / static_cast<double>(m);
    s.activity = static_cast<double>(s.degree) / static_cast<double>(n);
    s.lengths = config.lengths.resolve(s.spammers);
    return s;
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

void aggregate(ExperimentResult& result) {
    result.aggregates.clear();
    for (std::size_t slot = 0; slot < result.methods.size(); ++slot) {
        MethodAggregate agg;
        agg.method = result.methods[slot];
        std::vector<double> aucs;
        for (const auto& record : result.realizations) aucs.push_back(record.outcomes.at(slot).auc);
        agg.auc = summarize(aucs);
        for (std::size_t l = 0; l < result.scenario.lengths.size(); ++l) {
            std::vector<double> recalls;
            for (const auto& record : result.realizations) recalls.push_back(record.outcomes.at(slot).recall.at(l));
            agg.recall.push_back(summarize(recalls));
        }
        result.aggregates.push_back(std::move(agg));
    }
}

const MethodAggregate& ExperimentResult::aggregate(Method method) const {
    for (const auto& agg : aggregates)
        if (agg.method == method) return agg;
    throw UsageError(std::string("method ") + std::string(to_string(method)) + " was not run");
}

RatingMatrix prepare_dataset(const ExperimentConfig& config) {
    return filter_core(load_ratings(config.input, config.load).matrix, config.min_user_degree);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t j = 0; j < count; ++j) task(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    const auto drain = [&] {
        for (std::size_t j = next++; j < count; j = next++) {
            try {
                task(j);
            } catch (...) {
                std::lock_guard lock(guard);
                if (j < failed_at) {
                    failed_at = j;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(drain);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

ExperimentResult run_scenario(const RatingMatrix& matrix, const ExperimentConfig& config) {
    check_methods(config);
    auto result = empty_result(matrix, config, resolve_scenario(config, matrix));
    parallel_for(result.realizations.size(), config.workers, [&](std::size_t r) {
        result.realizations[r] = run_realization(matrix, config, result.scenario, static_cast<int>(r));
    });
    aggregate(result);
    return result;
}

ExperimentResult run_scenario(const ExperimentConfig& config) {
    return run_scenario(prepare_dataset(config), config);
}

const SweepCell& SweepResult::cell(std::size_t q_index, std::size_t p_index) const {
    return cells.at(q_index * p_axis.size() + p_index);
}

namespace {

MetricGrid grid_of(const SweepResult& sweep, Method method, bool use_auc) {
    MetricGrid grid{sweep.p_axis, sweep.q_axis,
                    Eigen::MatrixXd(static_cast<Index>(sweep.q_axis.size()), static_cast<Index>(sweep.p_axis.size()))};
    for (std::size_t qi = 0; qi < sweep.q_axis.size(); ++qi) {
        for (std::size_t pi = 0; pi < sweep.p_axis.size(); ++pi) {
            const auto& agg = sweep.cell(qi, pi).result.aggregate(method);
            grid.values(static_cast<Index>(qi), static_cast<Index>(pi)) =
                use_auc ? agg.auc.mean : agg.recall.front().mean;
        }
    }
    return grid;
}

}  // namespace

MetricGrid SweepResult::recall_grid(Method method) const { return grid_of(*this, method, false); }

MetricGrid SweepResult::auc_grid(Method method) const { return grid_of(*this, method, true); }

std::optional<MetricGrid> SweepResult::recall_delta() const {
    const auto has = [this](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
    if (!has(Method::gr) || !has(Method::cr)) return std::nullopt;
    return recall_difference(recall_grid(Method::gr), recall_grid(Method::cr));
}

SweepResult run_sweep(const RatingMatrix& matrix, const ExperimentConfig& config, const SweepAxis& p_axis,
                      const SweepAxis& q_axis) {
    check_methods(config);
    SweepResult sweep;
    sweep.p_axis = p_axis.values();
    sweep.q_axis = q_axis.values();
    sweep.methods = config.methods;

    std::vector<ExperimentConfig> cell_configs;
    for (double q : sweep.q_axis) {
        for (double p : sweep.p_axis) {
            ExperimentConfig cell = config;
            cell.spammers.reset();
            cell.degree.reset();
            cell.spammer_ratio = q;
            cell.activity = p;
            cell.lengths = LengthSpec{};
            try {
                auto scenario = resolve_scenario(cell, matrix);
                sweep.cells.push_back({p, q, empty_result(matrix, cell, std::move(scenario))});
            } catch (const ConfigError& err) {
                std::ostringstream where;
                where << "sweep cell p=" << p << " q=" << q << ": " << err.what();
                throw ConfigError(where.str());
            }
            cell_configs.push_back(std::move(cell));
        }
    }

    const auto per_cell = static_cast<std::size_t>(config.realizations);
    parallel_for(sweep.cells.size() * per_cell, config.workers, [&](std::size_t task) {
        const std::size_t c = task / per_cell;
        const std::size_t r = task % per_cell;
        auto& result = sweep.cells[c].result;
        result.realizations[r] = run_realization(matrix, cell_configs[c], result.scenario, static_cast<int>(r));
    });
    for (auto& cell : sweep.cells) aggregate(cell.result);
    return sweep;
}

}  // namespace grouprank
