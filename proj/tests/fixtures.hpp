#pragma once

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grouprank/rating_matrix.hpp"

namespace grouprank::testing {

/// Builds a matrix from (user id, object id, rating) triples, ids in order of
/// first appearance.
inline RatingMatrix matrix_from(const std::vector<std::tuple<std::string, std::string, Rating>>& triples,
                                RatingScale scale = {}) {
    std::vector<std::string> users;
    std::vector<std::string> objects;
    std::map<std::string, Index> user_index;
    std::map<std::string, Index> object_index;
    std::vector<RatingEntry> entries;
    for (const auto& [u, o, r] : triples) {
        auto [ui, new_user] = user_index.try_emplace(u, static_cast<Index>(users.size()));
        if (new_user) users.push_back(u);
        auto [oi, new_object] = object_index.try_emplace(o, static_cast<Index>(objects.size()));
        if (new_object) objects.push_back(o);
        entries.push_back({ui->second, oi->second, r});
    }
    return RatingMatrix(std::move(users), std::move(objects), entries, std::move(scale));
}

/// Dense rows, 0 = not rated.
inline RatingMatrix matrix_from_dense(const std::vector<std::vector<Rating>>& rows, RatingScale scale = {}) {
    std::vector<std::string> users;
    std::vector<std::string> objects;
    std::vector<RatingEntry> entries;
    const std::size_t n = rows.empty() ? 0 : rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i) users.push_back("u" + std::to_string(i));
    for (std::size_t a = 0; a < n; ++a) objects.push_back("o" + std::to_string(a));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t a = 0; a < n; ++a)
            if (rows[i][a] != 0) entries.push_back({static_cast<Index>(i), static_cast<Index>(a), rows[i][a]});
    return RatingMatrix(std::move(users), std::move(objects), entries, std::move(scale));
}

/// Small network matching the worked example of the group-based method:
///  - O2 has five raters in groups of sizes {1, 2, 2}; U2 and U4 rate it 4.
///  - U3's rewardings are {19/20, 11/20}: mean 0.75, deviation 0.2, R = 3.75.
///  - U5 has the lowest reputation and U3 the second lowest.
/// W1..W19 are background raters that make those group sizes possible.
inline RatingMatrix worked_example() {
    std::vector<std::tuple<std::string, std::string, Rating>> t;
    std::vector<std::string> crowd;
    for (int w = 1; w <= 19; ++w) crowd.push_back("W" + std::to_string(w));
    const std::vector<std::string> named{"U1", "U2", "U3", "U4", "U5"};

    // O1: twenty raters, everybody but U5 gives 5.
    for (const auto& u : named) t.emplace_back(u, "O1", u == "U5" ? 1 : 5);
    for (int w = 0; w < 15; ++w) t.emplace_back(crowd[w], "O1", 5);
    // O2: groups {U2, U4} -> 4, {U1, W1} -> 5, {U5} -> 1.
    t.emplace_back("U1", "O2", 5);
    t.emplace_back("U2", "O2", 4);
    t.emplace_back("U4", "O2", 4);
    t.emplace_back("U5", "O2", 1);
    t.emplace_back("W1", "O2", 5);
    // O3: U3 with ten others on 3, U5 with eight others on 4.
    t.emplace_back("U3", "O3", 3);
    for (int w = 1; w <= 10; ++w) t.emplace_back(crowd[w], "O3", 3);
    t.emplace_back("U5", "O3", 4);
    for (int w = 11; w <= 18; ++w) t.emplace_back(crowd[w], "O3", 4);
    // O4..O7: unanimous among everyone except U3 and U5.
    for (int o = 4; o <= 7; ++o) {
        const std::string object = "O" + std::to_string(o);
        for (const auto& u : named)
            if (u != "U3" && u != "U5") t.emplace_back(u, object, 2);
        for (const auto& w : crowd) t.emplace_back(w, object, 2);
    }
    return matrix_from(t);
}

/// Random matrix with every user rating at least `min_degree` objects.
inline RatingMatrix random_matrix(std::mt19937_64& rng, Index users, Index objects, const RatingScale& scale,
                                  double density, Index min_degree = 1) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> level(0, scale.size() - 1);
    std::uniform_int_distribution<Index> pick(0, objects - 1);
    std::vector<std::vector<Rating>> rows(static_cast<std::size_t>(users), std::vector<Rating>(static_cast<std::size_t>(objects), 0));
    for (auto& row : rows) {
        Index degree = 0;
        for (auto& cell : row)
            if (coin(rng) < density) {
                cell = scale.level(level(rng));
                ++degree;
            }
        while (degree < std::min(min_degree, objects)) {
            auto& cell = row[static_cast<std::size_t>(pick(rng))];
            if (cell == 0) {
                cell = scale.level(level(rng));
                ++degree;
            }
        }
    }
    return matrix_from_dense(rows, scale);
}

}  // namespace grouprank::testing
