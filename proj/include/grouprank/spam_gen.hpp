#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "grouprank/rating_matrix.hpp"

namespace grouprank {

enum class SpamType { malicious, random };

std::string_view to_string(SpamType type) noexcept;
SpamType parse_spam_type(std::string_view text);

/// Seeded generator with platform-independent derived draws. The standard
/// distributions are implementation-defined, so bounded integers are drawn by
/// rejection sampling on the raw 64-bit stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    bool coin() { return (engine_() >> 63) != 0; }
    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// `count` distinct values from [0, population), in draw order.
    std::vector<Index> sample(Index population, Index count);

private:
    std::mt19937_64 engine_;
};

struct SpamScenario {
    SpamType type = SpamType::malicious;
    /// d: number of spammers.
    Index spammers = 50;
    /// k: ratings per spammer after injection.
    Index degree = 84;
    std::uint64_t seed = 42;

    /// q = d / m
    double spammer_ratio(Index users) const { return static_cast<double>(spammers) / static_cast<double>(users); }
    /// p = k / n
    double activity(Index objects) const { return static_cast<double>(degree) / static_cast<double>(objects); }
};

/// k = round(p n). Throws ConfigError when the result is outside [1, n].
Index degree_for_activity(double activity, Index objects);
/// d = round(q m). Throws ConfigError when the result is outside [1, m].
Index spammers_for_ratio(double ratio, Index users);

struct InjectedDataset {
    RatingMatrix matrix;
    /// Ground-truth spammer indices, ascending.
    std::vector<Index> spammers;
    SpamScenario scenario;
};

/// Malicious: min or max of the scale with probability 1/2 each. Random:
/// uniform over the scale.
Rating draw_distorted_rating(SpamType type, const RatingScale& scale, Rng& rng);

/// Turns `scenario.spammers` uniformly chosen users into spammers with exactly
/// `scenario.degree` distorted ratings each.
///
/// A spammer with at least k original ratings keeps a random size-k subset of
/// the objects they rated, with fresh distorted ratings; the rest of their row
/// is dropped. A spammer with fewer keeps every rated object and gains
/// distorted ratings on k - k_i random objects they had not rated. All other
/// rows are copied unchanged.
InjectedDataset inject_spammers(const RatingMatrix& matrix, const SpamScenario& scenario);

}  // namespace grouprank
