// grouprank: reputation ranking benchmark for rating networks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "grouprank/corr_rank.hpp"
#include "grouprank/errors.hpp"
#include "grouprank/experiment.hpp"
#include "grouprank/group_rank.hpp"
#include "grouprank/metrics.hpp"
#include "grouprank/report.hpp"

using namespace grouprank;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kData = 3, kIo = 4 };

struct Options {
    std::string input;
    std::string format = "auto";
    Index min_degree = 20;
    std::string methods = "gr,cr";
    std::string spam_type = "malicious";
    std::optional<Index> d;
    std::optional<double> q;
    std::optional<double> p;
    std::optional<Index> k;
    std::string lengths = "d";
    int realizations = 100;
    std::uint64_t seed = 42;
    std::string out = "results";
    std::string emit = "csv,json";
    int workers = 1;
    int cr_max_iter = 200;
    double cr_epsilon = 1e-6;
    bool cr_signed = false;
    std::string p_range = "0.01:0.10:0.01";
    std::string q_range = "0.01:0.10:0.01";
    double bin_width = 0.05;
    std::string normalize = "max";
};

void add_input(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "rating file: user, item, rating[, ignored...]")->required();
    cmd->add_option("--format", o.format, "tsv, csv or auto")->check(CLI::IsMember({"auto", "tsv", "csv"}));
    cmd->add_option("--min-degree", o.min_degree, "keep users with at least this many ratings");
}

void add_cr(CLI::App* cmd, Options& o) {
    cmd->add_option("--cr-max-iter", o.cr_max_iter, "CR iteration cap");
    cmd->add_option("--cr-epsilon", o.cr_epsilon, "CR convergence threshold on reputation change");
    cmd->add_flag("--cr-signed", o.cr_signed, "keep negative CR correlations instead of clipping at 0");
}

void add_experiment(CLI::App* cmd, Options& o) {
    cmd->add_option("--method", o.methods, "comma-separated subset of gr,cr");
    cmd->add_option("--spam-type", o.spam_type, "malicious or random")
        ->check(CLI::IsMember({"malicious", "random"}));
    cmd->add_option("--realizations", o.realizations, "independent realizations per scenario");
    cmd->add_option("--seed", o.seed, "base seed; realization r uses seed + r");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--emit", o.emit, "csv, json or csv,json");
    cmd->add_option("--workers", o.workers, "worker threads");
    add_cr(cmd, o);
}

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> methods;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, ','))
        if (!part.empty()) methods.push_back(parse_method(part));
    if (methods.empty()) throw ConfigError("no ranking method selected");
    return methods;
}

LoadOptions load_options(const Options& o) {
    LoadOptions load;
    if (o.format == "tsv") load.delimiter = Delimiter::tab;
    if (o.format == "csv") load.delimiter = Delimiter::comma;
    return load;
}

CrConfig cr_config(const Options& o) {
    CrConfig cr;
    cr.max_iterations = o.cr_max_iter;
    cr.convergence_epsilon = o.cr_epsilon;
    cr.clip_negative = !o.cr_signed;
    cr.validate();
    return cr;
}

ExperimentConfig experiment_config(const Options& o) {
    ExperimentConfig config;
    config.input = o.input;
    config.load = load_options(o);
    config.min_user_degree = o.min_degree;
    config.methods = parse_methods(o.methods);
    config.spam_type = parse_spam_type(o.spam_type);
    config.spammers = o.d;
    config.spammer_ratio = o.q;
    if (!o.d && !o.q) config.spammers = 50;
    config.degree = o.k;
    config.activity = o.k ? std::nullopt : std::optional<double>(o.p.value_or(0.05));
    config.lengths = LengthSpec::parse(o.lengths);
    config.realizations = o.realizations;
    config.seed = o.seed;
    config.cr = cr_config(o);
    config.workers = o.workers;
    return config;
}

RatingMatrix load_filtered(const Options& o) {
    const auto report = load_ratings(std::filesystem::path(o.input), load_options(o));
    return filter_core(report.matrix, o.min_degree);
}

void print_paths(const std::vector<std::filesystem::path>& paths) {
    for (const auto& path : paths) std::cout << "wrote " << path.string() << '\n';
}

int cmd_run(const Options& o) {
    const auto config = experiment_config(o);
    const auto matrix = prepare_dataset(config);
    const auto result = run_scenario(matrix, config);
    const auto& s = result.scenario;
    std::printf("%s spammers: d=%lld k=%lld q=%.4f p=%.4f, %d realizations\n",
                std::string(to_string(config.spam_type)).c_str(), static_cast<long long>(s.spammers),
                static_cast<long long>(s.degree), s.spammer_ratio, s.activity, config.realizations);
    for (const auto& agg : result.aggregates) {
        std::printf("%s  AUC %.4f +- %.4f", std::string(to_string(agg.method)).c_str(), agg.auc.mean, agg.auc.stddev);
        if (s.lengths.size() == 1)
            std::printf("  R_c(L=%lld) %.4f", static_cast<long long>(s.lengths.front()), agg.recall.front().mean);
        std::printf("\n");
    }
    print_paths(emit_results(result, config, parse_formats(o.emit), o.out));
    return kOk;
}

int cmd_sweep(const Options& o) {
    auto config = experiment_config(o);
    const auto matrix = prepare_dataset(config);
    const auto sweep = run_sweep(matrix, config, SweepAxis::parse(o.p_range), SweepAxis::parse(o.q_range));
    if (const auto delta = sweep.recall_delta()) {
        const auto positive = (delta->values.array() > 0.0).count();
        std::printf("delta R_c > 0 on %lld of %lld cells\n", static_cast<long long>(positive),
                    static_cast<long long>(delta->values.size()));
    }
    print_paths(emit_sweep(sweep, config, parse_formats(o.emit), o.out));
    return kOk;
}

int cmd_stats(const Options& o) {
    const auto s = stats(load_filtered(o));
    std::printf("data set\tm\tn\t<k_U>\t<k_O>\tS\n");
    std::printf("%s\t%lld\t%lld\t%.0f\t%.0f\t%.3f\n", std::filesystem::path(o.input).filename().string().c_str(),
                static_cast<long long>(s.users), static_cast<long long>(s.objects), s.mean_user_degree,
                s.mean_object_degree, s.sparsity);
    std::printf("# l=%lld <k_U>=%.6f <k_O>=%.6f S=%.6f\n", static_cast<long long>(s.ratings), s.mean_user_degree,
                s.mean_object_degree, s.sparsity);
    return kOk;
}

int cmd_rho(const Options& o) {
    const auto matrix = load_filtered(o);
    const auto error = rating_error(matrix);
    const auto norm = o.normalize == "minmax" ? Normalization::min_max : Normalization::max_scale;
    std::printf("method\tbinned_rho\tuser_rho\tbins\texcluded\n");
    for (Method method : parse_methods(o.methods)) {
        const auto reps = method == Method::gr ? gr_rank(matrix) : cr_rank(matrix, cr_config(o));
        const auto binned = binned_rho(reps, error, o.bin_width, norm);
        const auto raw = user_rho(reps, error);
        const auto show = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); };
        std::printf("%s\t%s\t%s\t%zu\t%lld\n", std::string(to_string(method)).c_str(), show(binned.rho).c_str(),
                    show(raw.rho).c_str(), binned.bins.size(), static_cast<long long>(binned.excluded));
    }
    return kOk;
}

int cmd_dump(const Options& o) {
    const auto matrix = load_filtered(o);
    const auto table = group_sizes(matrix);
    const auto rewards = rewarding_matrix(matrix, table);
    std::filesystem::create_directories(o.out);
    const auto groups_path = std::filesystem::path(o.out) / "groups.tsv";
    const auto rewards_path = std::filesystem::path(o.out) / "rewards.tsv";
    std::ofstream groups(groups_path);
    std::ofstream rewarding(rewards_path);
    if (!groups || !rewarding) throw IoError("cannot write into " + o.out);
    write_group_table(groups, matrix, table);
    write_rewarding_matrix(rewarding, matrix, rewards);
    print_paths({groups_path, rewards_path});
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-based and correlation-based reputation ranking for rating networks"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "inject spammers and score the ranking methods");
    add_input(run, o);
    add_experiment(run, o);
    run->add_option("--d", o.d, "number of spammers");
    run->add_option("--q", o.q, "spammer ratio d/m (alternative to --d)");
    run->add_option("--p", o.p, "spammer activity k/n (default 0.05)");
    run->add_option("--k", o.k, "ratings per spammer (overrides --p)");
    run->add_option("--L", o.lengths, "suspect-list lengths: d, curve, a:b or a,b,c");

    auto* sweep = app.add_subcommand("sweep", "recall grids over spammer activity p and ratio q, with L = d");
    add_input(sweep, o);
    add_experiment(sweep, o);
    sweep->add_option("--p-range", o.p_range, "start:stop:step");
    sweep->add_option("--q-range", o.q_range, "start:stop:step");

    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics after degree filtering");
    add_input(stats_cmd, o);

    auto* rho = app.add_subcommand("rho", "correlation between reputation and rating error");
    add_input(rho, o);
    rho->add_option("--method", o.methods, "comma-separated subset of gr,cr");
    rho->add_option("--bin-width", o.bin_width, "width of the normalised error bins");
    rho->add_option("--normalize", o.normalize, "max or minmax")->check(CLI::IsMember({"max", "minmax"}));
    add_cr(rho, o);

    auto* dump = app.add_subcommand("dump", "write group sizes and the rewarding matrix as TSV");
    add_input(dump, o);
    dump->add_option("--out", o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*run) return cmd_run(o);
        if (*sweep) return cmd_sweep(o);
        if (*stats_cmd) return cmd_stats(o);
        if (*rho) return cmd_rho(o);
        if (*dump) return cmd_dump(o);
    } catch (const ConfigError& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return kConfig;
    } catch (const UsageError& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return kConfig;
    } catch (const ParseError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    } catch (const RatingDomainError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    } catch (const IoError& err) {
        std::cerr << "I/O error: " << err.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& err) {
        std::cerr << "I/O error: " << err.what() << '\n';
        return kIo;
    }
    return kOk;
}
