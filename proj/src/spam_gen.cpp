#include "grouprank/spam_gen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "grouprank/errors.hpp"

namespace grouprank {

std::string_view to_string(SpamType type) noexcept {
    return type == SpamType::malicious ? "malicious" : "random";
}

SpamType parse_spam_type(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "malicious") return SpamType::malicious;
    if (lower == "random") return SpamType::random;
    throw ConfigError("unknown spam type '" + std::string(text) + "' (expected malicious or random)");
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw UsageError("Rng::below needs a positive bound");
    // Reject the low 2^64 mod bound values so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

std::vector<Index> Rng::sample(Index population, Index count) {
    if (count < 0 || count > population) throw UsageError("sample size exceeds population");
    std::vector<Index> pool(static_cast<std::size_t>(population));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index j = 0; j < count; ++j) {
        const auto pick = j + static_cast<Index>(below(static_cast<std::uint64_t>(population - j)));
        std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
}

Index degree_for_activity(double activity, Index objects) {
    const auto k = static_cast<Index>(std::llround(activity * static_cast<double>(objects)));
    if (k < 1 || k > objects)
        throw ConfigError("activity p=" + std::to_string(activity) + " gives k=" + std::to_string(k) +
                          " ratings per spammer, outside [1, " + std::to_string(objects) + "]");
    return k;
}

Index spammers_for_ratio(double ratio, Index users) {
    const auto d = static_cast<Index>(std::llround(ratio * static_cast<double>(users)));
    if (d < 1 || d > users)
        throw ConfigError("spammer ratio q=" + std::to_string(ratio) + " gives d=" + std::to_string(d) +
                          " spammers, outside [1, " + std::to_string(users) + "]");
    return d;
}

Rating draw_distorted_rating(SpamType type, const RatingScale& scale, Rng& rng) {
    if (type == SpamType::malicious) return rng.coin() ? scale.max() : scale.min();
    return scale.level(static_cast<std::size_t>(rng.below(scale.size())));
}

InjectedDataset inject_spammers(const RatingMatrix& matrix, const SpamScenario& scenario) {
    const Index m = matrix.users();
    const Index n = matrix.objects();
    if (scenario.spammers < 1 || scenario.spammers > m)
        throw ConfigError("spammer count d=" + std::to_string(scenario.spammers) + " outside [1, " +
                          std::to_string(m) + "]");
    if (scenario.degree < 1 || scenario.degree > n)
        throw ConfigError("spammer degree k=" + std::to_string(scenario.degree) + " outside [1, " +
                          std::to_string(n) + "]");

    Rng rng(scenario.seed);
    InjectedDataset out;
    out.scenario = scenario;
    out.spammers = rng.sample(m, scenario.spammers);
    std::sort(out.spammers.begin(), out.spammers.end());

    std::vector<char> is_spammer(static_cast<std::size_t>(m), 0);
    for (Index s : out.spammers) is_spammer[static_cast<std::size_t>(s)] = 1;

    std::vector<RatingEntry> entries;
    entries.reserve(static_cast<std::size_t>(matrix.ratings()));
    for (const auto& e : matrix.entries())
        if (!is_spammer[static_cast<std::size_t>(e.user)]) entries.push_back(e);

    const auto& rows = matrix.by_user();
    std::vector<char> rated(static_cast<std::size_t>(n), 0);
    for (Index user : out.spammers) {
        std::vector<Index> own;
        for (RatingMatrix::UserMajor::InnerIterator it(rows, user); it; ++it) own.push_back(it.col());

        std::vector<Index> targets;
        if (scenario.degree <= static_cast<Index>(own.size())) {
            for (Index pick : rng.sample(static_cast<Index>(own.size()), scenario.degree))
                targets.push_back(own[static_cast<std::size_t>(pick)]);
        } else {
            targets = own;
            for (Index a : own) rated[static_cast<std::size_t>(a)] = 1;
            std::vector<Index> unrated;
            for (Index a = 0; a < n; ++a)
                if (!rated[static_cast<std::size_t>(a)]) unrated.push_back(a);
            for (Index a : own) rated[static_cast<std::size_t>(a)] = 0;
            const Index extra = scenario.degree - static_cast<Index>(own.size());
            for (Index pick : rng.sample(static_cast<Index>(unrated.size()), extra))
                targets.push_back(unrated[static_cast<std::size_t>(pick)]);
        }
        std::sort(targets.begin(), targets.end());
        for (Index a : targets) entries.push_back({user, a, draw_distorted_rating(scenario.type, matrix.scale(), rng)});
    }

    std::vector<std::string> users(matrix.user_ids().begin(), matrix.user_ids().end());
    std::vector<std::string> objects(matrix.object_ids().begin(), matrix.object_ids().end());
    out.matrix = RatingMatrix(std::move(users), std::move(objects), entries, matrix.scale());
    return out;
}

}  // namespace grouprank
