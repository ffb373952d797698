#include "grouprank/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "grouprank/errors.hpp"

namespace grouprank {

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

nlohmann::json real(double value) {
    return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
}

double real_from(const nlohmann::json& value) {
    return value.is_null() ? std::nan("") : value.get<double>();
}

nlohmann::json summary_json(const Summary& s) {
    return {{"mean", real(s.mean)}, {"std", real(s.stddev)}};
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

}  // namespace

std::vector<EmitFormat> parse_formats(const std::string& text) {
    std::vector<EmitFormat> formats;
    std::stringstream stream(text);
    std::string part;
    while (std::getline(stream, part, ',')) {
        if (part == "csv")
            formats.push_back(EmitFormat::csv);
        else if (part == "json")
            formats.push_back(EmitFormat::json);
        else
            throw ConfigError("unknown output format '" + part + "'");
    }
    if (formats.empty()) throw ConfigError("no output format given");
    return formats;
}

std::string format_real(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

void write_curves_csv(std::ostream& out, const ExperimentResult& result) {
    out << "realization,seed,method,L,recall\n";
    for (const auto& record : result.realizations)
        for (const auto& outcome : record.outcomes)
            for (std::size_t l = 0; l < result.scenario.lengths.size(); ++l)
                out << record.index << ',' << record.seed << ',' << to_string(outcome.method) << ','
                    << result.scenario.lengths[l] << ',' << format_real(outcome.recall[l]) << '\n';
}

void write_realizations_csv(std::ostream& out, const ExperimentResult& result) {
    out << "realization,seed,method,auc,iterations\n";
    for (const auto& record : result.realizations)
        for (const auto& outcome : record.outcomes)
            out << record.index << ',' << record.seed << ',' << to_string(outcome.method) << ','
                << format_real(outcome.auc) << ',' << outcome.iterations << '\n';
}

void write_aggregate_csv(std::ostream& out, const ExperimentResult& result) {
    out << "method,spam_type,d,k,q,p,L,mean_recall,std_recall,mean_auc,std_auc,realizations\n";
    const auto& s = result.scenario;
    for (const auto& agg : result.aggregates)
        for (std::size_t l = 0; l < agg.recall.size(); ++l)
            out << to_string(agg.method) << ',' << to_string(result.spam_type) << ',' << s.spammers << ','
                << s.degree << ',' << format_real(s.spammer_ratio) << ',' << format_real(s.activity) << ','
                << s.lengths[l] << ',' << format_real(agg.recall[l].mean) << ','
                << format_real(agg.recall[l].stddev) << ',' << format_real(agg.auc.mean) << ','
                << format_real(agg.auc.stddev) << ',' << result.realizations.size() << '\n';
}

void write_grid_csv(std::ostream& out, const SweepResult& sweep) {
    out << "p,q,d,k,method,mean_recall,std_recall,mean_auc,std_auc\n";
    for (const auto& cell : sweep.cells)
        for (const auto& agg : cell.result.aggregates)
            out << format_real(cell.activity) << ',' << format_real(cell.spammer_ratio) << ','
                << cell.result.scenario.spammers << ',' << cell.result.scenario.degree << ','
                << to_string(agg.method) << ',' << format_real(agg.recall.front().mean) << ','
                << format_real(agg.recall.front().stddev) << ',' << format_real(agg.auc.mean) << ','
                << format_real(agg.auc.stddev) << '\n';
}

void write_delta_csv(std::ostream& out, const SweepResult& sweep) {
    out << "p,q,delta_recall\n";
    const auto delta = sweep.recall_delta();
    if (!delta) return;
    for (std::size_t qi = 0; qi < delta->q_axis.size(); ++qi)
        for (std::size_t pi = 0; pi < delta->p_axis.size(); ++pi)
            out << format_real(delta->p_axis[pi]) << ',' << format_real(delta->q_axis[qi]) << ','
                << format_real(delta->values(static_cast<Index>(qi), static_cast<Index>(pi))) << '\n';
}

void write_group_table(std::ostream& out, const RatingMatrix& matrix, const GroupRewardTable& table) {
    out << "object\trating\tgroup_size\treward\n";
    for (Index a = 0; a < table.objects(); ++a)
        for (Index s = 0; s < table.levels(); ++s)
            if (table.size(s, a) > 0)
                out << matrix.object_id(a) << '\t' << matrix.scale().level(static_cast<std::size_t>(s)) << '\t'
                    << table.size(s, a) << '\t' << format_real(table.reward(s, a)) << '\n';
}

void write_rewarding_matrix(std::ostream& out, const RatingMatrix& matrix, const RewardingMatrix& rewards) {
    out << "user\tobject\trating\treward\n";
    for (Index i = 0; i < rewards.rows(); ++i) {
        RatingMatrix::UserMajor::InnerIterator rating(matrix.by_user(), i);
        for (RewardingMatrix::InnerIterator it(rewards, i); it; ++it, ++rating)
            out << matrix.user_id(i) << '\t' << matrix.object_id(it.col()) << '\t' << rating.value() << '\t'
                << format_real(it.value()) << '\n';
    }
}

nlohmann::json to_json(const DatasetStats& s) {
    return {{"users", s.users},
            {"objects", s.objects},
            {"ratings", s.ratings},
            {"mean_user_degree", s.mean_user_degree},
            {"mean_object_degree", s.mean_object_degree},
            {"sparsity", s.sparsity}};
}

nlohmann::json to_json(const ExperimentResult& result) {
    nlohmann::json doc;
    doc["spam_type"] = to_string(result.spam_type);
    doc["base_seed"] = result.base_seed;
    const auto& s = result.scenario;
    doc["scenario"] = {{"d", s.spammers}, {"k", s.degree}, {"q", s.spammer_ratio}, {"p", s.activity},
                       {"lengths", s.lengths}};
    doc["methods"] = nlohmann::json::array();
    for (Method m : result.methods) doc["methods"].push_back(to_string(m));
    doc["dataset"] = to_json(result.dataset);

    auto& records = doc["realizations"] = nlohmann::json::array();
    for (const auto& record : result.realizations) {
        nlohmann::json outcomes = nlohmann::json::array();
        for (const auto& o : record.outcomes) {
            nlohmann::json recall = nlohmann::json::array();
            for (double v : o.recall) recall.push_back(real(v));
            outcomes.push_back({{"method", to_string(o.method)},
                                {"auc", real(o.auc)},
                                {"iterations", o.iterations},
                                {"recall", std::move(recall)}});
        }
        records.push_back({{"index", record.index}, {"seed", record.seed}, {"outcomes", std::move(outcomes)}});
    }

    auto& aggs = doc["aggregates"] = nlohmann::json::array();
    for (const auto& agg : result.aggregates) {
        nlohmann::json recall = nlohmann::json::array();
        for (std::size_t l = 0; l < agg.recall.size(); ++l) {
            auto entry = summary_json(agg.recall[l]);
            entry["L"] = s.lengths.at(l);
            recall.push_back(std::move(entry));
        }
        aggs.push_back({{"method", to_string(agg.method)}, {"auc", summary_json(agg.auc)}, {"recall", recall}});
    }
    return doc;
}

ExperimentResult experiment_from_json(const nlohmann::json& doc) {
    ExperimentResult result;
    try {
        result.spam_type = parse_spam_type(doc.at("spam_type").get<std::string>());
        result.base_seed = doc.at("base_seed").get<std::uint64_t>();
        const auto& s = doc.at("scenario");
        result.scenario.spammers = s.at("d").get<Index>();
        result.scenario.degree = s.at("k").get<Index>();
        result.scenario.spammer_ratio = s.at("q").get<double>();
        result.scenario.activity = s.at("p").get<double>();
        result.scenario.lengths = s.at("lengths").get<std::vector<Index>>();
        for (const auto& m : doc.at("methods")) result.methods.push_back(parse_method(m.get<std::string>()));
        const auto& d = doc.at("dataset");
        result.dataset = {d.at("users").get<Index>(),
                          d.at("objects").get<Index>(),
                          d.at("ratings").get<Index>(),
                          d.at("mean_user_degree").get<double>(),
                          d.at("mean_object_degree").get<double>(),
                          d.at("sparsity").get<double>()};
        for (const auto& r : doc.at("realizations")) {
            RealizationRecord record;
            record.index = r.at("index").get<int>();
            record.seed = r.at("seed").get<std::uint64_t>();
            for (const auto& o : r.at("outcomes")) {
                MethodOutcome outcome;
                outcome.method = parse_method(o.at("method").get<std::string>());
                outcome.auc = real_from(o.at("auc"));
                outcome.iterations = o.at("iterations").get<int>();
                for (const auto& v : o.at("recall")) outcome.recall.push_back(real_from(v));
                record.outcomes.push_back(std::move(outcome));
            }
            result.realizations.push_back(std::move(record));
        }
        for (const auto& a : doc.at("aggregates")) {
            MethodAggregate agg;
            agg.method = parse_method(a.at("method").get<std::string>());
            agg.auc = {real_from(a.at("auc").at("mean")), real_from(a.at("auc").at("std"))};
            for (const auto& r : a.at("recall")) agg.recall.push_back({real_from(r.at("mean")), real_from(r.at("std"))});
            result.aggregates.push_back(std::move(agg));
        }
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(0, std::string("malformed result document: ") + err.what());
    }
    return result;
}

nlohmann::json to_json(const SweepResult& sweep) {
    nlohmann::json doc;
    doc["p_axis"] = sweep.p_axis;
    doc["q_axis"] = sweep.q_axis;
    doc["methods"] = nlohmann::json::array();
    for (Method m : sweep.methods) doc["methods"].push_back(to_string(m));
    auto& cells = doc["cells"] = nlohmann::json::array();
    for (const auto& cell : sweep.cells)
        cells.push_back({{"p", cell.activity}, {"q", cell.spammer_ratio}, {"result", to_json(cell.result)}});
    if (const auto delta = sweep.recall_delta()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Index qi = 0; qi < delta->values.rows(); ++qi) {
            nlohmann::json row = nlohmann::json::array();
            for (Index pi = 0; pi < delta->values.cols(); ++pi) row.push_back(real(delta->values(qi, pi)));
            rows.push_back(std::move(row));
        }
        doc["delta_recall"] = std::move(rows);
    }
    return doc;
}

nlohmann::json to_json(const ExperimentConfig& config) {
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : config.methods) methods.push_back(to_string(m));
    nlohmann::json doc{{"input", config.input.string()},
                       {"min_user_degree", config.min_user_degree},
                       {"methods", methods},
                       {"spam_type", to_string(config.spam_type)},
                       {"L", config.lengths.describe()},
                       {"realizations", config.realizations},
                       {"seed", config.seed},
                       {"workers", config.workers},
                       {"cr", {{"max_iterations", config.cr.max_iterations},
                               {"epsilon", config.cr.convergence_epsilon},
                               {"clip_negative", config.cr.clip_negative}}}};
    doc["d"] = config.spammers ? nlohmann::json(*config.spammers) : nlohmann::json(nullptr);
    doc["q"] = config.spammer_ratio ? nlohmann::json(*config.spammer_ratio) : nlohmann::json(nullptr);
    doc["k"] = config.degree ? nlohmann::json(*config.degree) : nlohmann::json(nullptr);
    doc["p"] = config.activity ? nlohmann::json(*config.activity) : nlohmann::json(nullptr);
    return doc;
}

nlohmann::json provenance(const ExperimentConfig& config) {
    return {{"tool", "grouprank"}, {"version", kToolVersion}, {"generated_at", utc_now()}, {"config", to_json(config)}};
}

namespace {

std::filesystem::path prepare_directory(const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
    return directory;
}

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
    auto out = open_output(path);
    writer(out);
    close_output(out, path);
    return path;
}

}  // namespace

std::vector<std::filesystem::path> emit_results(const ExperimentResult& result, const ExperimentConfig& config,
                                                const std::vector<EmitFormat>& formats,
                                                const std::filesystem::path& directory) {
    prepare_directory(directory);
    std::vector<std::filesystem::path> written;
    for (EmitFormat format : formats) {
        if (format == EmitFormat::csv) {
            written.push_back(write_file(directory / "aggregate.csv", [&](std::ostream& o) { write_aggregate_csv(o, result); }));
            written.push_back(write_file(directory / "curves.csv", [&](std::ostream& o) { write_curves_csv(o, result); }));
            written.push_back(
                write_file(directory / "realizations.csv", [&](std::ostream& o) { write_realizations_csv(o, result); }));
        } else {
            nlohmann::json doc{{"provenance", provenance(config)}, {"result", to_json(result)}};
            written.push_back(write_file(directory / "result.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; }));
        }
    }
    return written;
}

std::vector<std::filesystem::path> emit_sweep(const SweepResult& sweep, const ExperimentConfig& config,
                                              const std::vector<EmitFormat>& formats,
                                              const std::filesystem::path& directory) {
    prepare_directory(directory);
    std::vector<std::filesystem::path> written;
    for (EmitFormat format : formats) {
        if (format == EmitFormat::csv) {
            written.push_back(write_file(directory / "grid.csv", [&](std::ostream& o) { write_grid_csv(o, sweep); }));
            written.push_back(write_file(directory / "delta.csv", [&](std::ostream& o) { write_delta_csv(o, sweep); }));
        } else {
            nlohmann::json doc{{"provenance", provenance(config)}, {"sweep", to_json(sweep)}};
            written.push_back(write_file(directory / "sweep.json", [&](std::ostream& o) { o << doc.dump(2) << '\n'; }));
        }
    }
    return written;
}

}  // namespace grouprank
