#include "grouprank/rating_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <string_view>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "grouprank/errors.hpp"

namespace grouprank {

namespace {

std::optional<long long> as_integer(std::string_view text) {
    long long value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
    return value;
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value) {
    for (int byte = 0; byte < 8; ++byte) {
        hash ^= (value >> (8 * byte)) & 0xffu;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view blanks = " \t\r\n";
    const auto first = text.find_first_not_of(blanks);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(blanks);
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    if (delimiter == ' ') {
        std::size_t pos = 0;
        while (pos < line.size()) {
            const auto start = line.find_first_not_of(" \t", pos);
            if (start == std::string_view::npos) break;
            auto stop = line.find_first_of(" \t", start);
            if (stop == std::string_view::npos) stop = line.size();
            fields.push_back(line.substr(start, stop - start));
            pos = stop;
        }
        return fields;
    }
    std::size_t start = 0;
    for (;;) {
        const auto stop = line.find(delimiter, start);
        fields.push_back(trim(line.substr(start, stop - start)));
        if (stop == std::string_view::npos) break;
        start = stop + 1;
    }
    return fields;
}

char detect_delimiter(std::string_view line) {
    if (line.find('\t') != std::string_view::npos) return '\t';
    if (line.find(',') != std::string_view::npos) return ',';
    return ' ';
}

/// Parses a rating field. Integral decimal spellings such as "4.0" are accepted.
std::optional<double> as_number(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
    return value;
}

}  // namespace

RatingScale::RatingScale() : levels_{1, 2, 3, 4, 5} {}

RatingScale::RatingScale(std::vector<Rating> levels) : levels_(std::move(levels)) {
    std::sort(levels_.begin(), levels_.end());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    if (levels_.empty()) throw ConfigError("rating scale must contain at least one level");
}

RatingScale RatingScale::range(Rating lowest, Rating highest) {
    if (highest < lowest) throw ConfigError("rating scale range is empty");
    std::vector<Rating> levels(static_cast<std::size_t>(highest - lowest + 1));
    std::iota(levels.begin(), levels.end(), lowest);
    return RatingScale(std::move(levels));
}

std::optional<std::size_t> RatingScale::index_of(Rating value) const noexcept {
    const auto it = std::lower_bound(levels_.begin(), levels_.end(), value);
    if (it == levels_.end() || *it != value) return std::nullopt;
    return static_cast<std::size_t>(it - levels_.begin());
}

RatingMatrix::RatingMatrix() : by_user_(0, 0), by_object_(0, 0) {
    fingerprint_ = fnv1a(fnv1a(0xcbf29ce484222325ull, 0), 0);
}

RatingMatrix::RatingMatrix(std::vector<std::string> user_ids, std::vector<std::string> object_ids,
                           std::span<const RatingEntry> entries, RatingScale scale)
    : user_ids_(std::move(user_ids)),
      object_ids_(std::move(object_ids)),
      scale_(std::move(scale)) {
    const auto m = static_cast<Index>(user_ids_.size());
    const auto n = static_cast<Index>(object_ids_.size());
    std::vector<Eigen::Triplet<Rating>> triplets;
    triplets.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.user < 0 || e.user >= m || e.object < 0 || e.object >= n)
            throw UsageError("rating entry index out of range");
        if (!scale_.contains(e.rating))
            throw RatingDomainError("rating " + std::to_string(e.rating) + " is not in the rating scale");
        triplets.emplace_back(static_cast<int>(e.user), static_cast<int>(e.object), e.rating);
    }
    by_user_.resize(m, n);
    // Duplicates would be summed; count them instead and reject.
    bool repeated = false;
    by_user_.setFromTriplets(triplets.begin(), triplets.end(), [&repeated](Rating a, Rating) {
        repeated = true;
        return a;
    });
    if (repeated) throw UsageError("repeated (user, object) pair in rating entries");
    by_user_.makeCompressed();
    by_object_ = by_user_;
    by_object_.makeCompressed();

    std::uint64_t hash = fnv1a(fnv1a(0xcbf29ce484222325ull, static_cast<std::uint64_t>(m)),
                               static_cast<std::uint64_t>(n));
    for (Index i = 0; i < m; ++i) {
        for (UserMajor::InnerIterator it(by_user_, i); it; ++it) {
            hash = fnv1a(hash, static_cast<std::uint64_t>(i));
            hash = fnv1a(hash, static_cast<std::uint64_t>(it.col()));
            hash = fnv1a(hash, static_cast<std::uint64_t>(static_cast<std::int64_t>(it.value())));
        }
    }
    fingerprint_ = hash;
}

Index RatingMatrix::user_degree(Index user) const {
    return by_user_.outerIndexPtr()[user + 1] - by_user_.outerIndexPtr()[user];
}

Index RatingMatrix::object_degree(Index object) const {
    return by_object_.outerIndexPtr()[object + 1] - by_object_.outerIndexPtr()[object];
}

Eigen::VectorXi RatingMatrix::user_degrees() const {
    Eigen::VectorXi k(users());
    for (Index i = 0; i < users(); ++i) k[i] = static_cast<int>(user_degree(i));
    return k;
}

Eigen::VectorXi RatingMatrix::object_degrees() const {
    Eigen::VectorXi k(objects());
    for (Index a = 0; a < objects(); ++a) k[a] = static_cast<int>(object_degree(a));
    return k;
}

std::vector<RatingEntry> RatingMatrix::entries() const {
    std::vector<RatingEntry> out;
    out.reserve(static_cast<std::size_t>(ratings()));
    for (Index i = 0; i < users(); ++i)
        for (UserMajor::InnerIterator it(by_user_, i); it; ++it)
            out.push_back({i, it.col(), it.value()});
    return out;
}

bool RatingMatrix::operator==(const RatingMatrix& other) const {
    return fingerprint_ == other.fingerprint_ && user_ids_ == other.user_ids_ &&
           object_ids_ == other.object_ids_ && scale_ == other.scale_ && entries() == other.entries();
}

DatasetStats stats(const RatingMatrix& matrix) {
    DatasetStats s;
    s.users = matrix.users();
    s.objects = matrix.objects();
    s.ratings = matrix.ratings();
    if (s.users > 0) s.mean_user_degree = static_cast<double>(s.ratings) / static_cast<double>(s.users);
    if (s.objects > 0) s.mean_object_degree = static_cast<double>(s.ratings) / static_cast<double>(s.objects);
    if (s.users > 0 && s.objects > 0)
        s.sparsity = static_cast<double>(s.ratings) / (static_cast<double>(s.users) * static_cast<double>(s.objects));
    return s;
}

RatingMatrix filter_core(const RatingMatrix& matrix, Index min_user_degree) {
    if (min_user_degree < 1) throw UsageError("min_user_degree must be at least 1");

    std::vector<Index> user_map(static_cast<std::size_t>(matrix.users()), -1);
    std::vector<std::string> kept_users;
    for (Index i = 0; i < matrix.users(); ++i) {
        if (matrix.user_degree(i) >= min_user_degree) {
            user_map[static_cast<std::size_t>(i)] = static_cast<Index>(kept_users.size());
            kept_users.push_back(matrix.user_id(i));
        }
    }

    std::vector<Index> object_map(static_cast<std::size_t>(matrix.objects()), -1);
    for (Index i = 0; i < matrix.users(); ++i) {
        if (user_map[static_cast<std::size_t>(i)] < 0) continue;
        for (RatingMatrix::UserMajor::InnerIterator it(matrix.by_user(), i); it; ++it)
            object_map[static_cast<std::size_t>(it.col())] = 0;
    }
    std::vector<std::string> kept_objects;
    for (Index a = 0; a < matrix.objects(); ++a) {
        auto& slot = object_map[static_cast<std::size_t>(a)];
        if (slot < 0) continue;
        slot = static_cast<Index>(kept_objects.size());
        kept_objects.push_back(matrix.object_id(a));
    }

    std::vector<RatingEntry> entries;
    for (const auto& e : matrix.entries()) {
        const Index user = user_map[static_cast<std::size_t>(e.user)];
        if (user < 0) continue;
        entries.push_back({user, object_map[static_cast<std::size_t>(e.object)], e.rating});
    }
    return RatingMatrix(std::move(kept_users), std::move(kept_objects), entries, matrix.scale());
}

bool natural_less(const std::string& a, const std::string& b) {
    const auto na = as_integer(a);
    const auto nb = as_integer(b);
    if (na && nb) return *na != *nb ? *na < *nb : a < b;
    if (na.has_value() != nb.has_value()) return na.has_value();
    return a < b;
}

LoadReport load_ratings(std::istream& in, const LoadOptions& options) {
    // Keyed by (user, object); last write wins.
    std::map<std::pair<std::string, std::string>, Rating> records;
    LoadReport report;

    char delimiter = options.delimiter == Delimiter::tab     ? '\t'
                     : options.delimiter == Delimiter::comma ? ','
                                                             : '\0';
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (delimiter == '\0') delimiter = detect_delimiter(body);
        const auto fields = split(body, delimiter);
        if (fields.size() < 3 || fields[0].empty() || fields[1].empty())
            throw ParseError(line_no, "expected user, object, rating fields");
        const auto number = as_number(fields[2]);
        if (!number) {
            if (!seen_data && !report.header_skipped) {
                report.header_skipped = true;
                continue;
            }
            throw ParseError(line_no, "rating '" + std::string(fields[2]) + "' is not numeric");
        }
        seen_data = true;
        const double value = *number;
        const auto rating = static_cast<Rating>(value);
        if (static_cast<double>(rating) != value || !options.scale.contains(rating))
            throw RatingDomainError("line " + std::to_string(line_no) + ": rating " + std::string(fields[2]) +
                                    " is not in the rating scale");
        ++report.records;
        auto [it, inserted] = records.insert_or_assign({std::string(fields[0]), std::string(fields[1])}, rating);
        if (!inserted) ++report.duplicates;
    }
    if (report.duplicates > 0)
        spdlog::warn("{} duplicate (user, object) records resolved by keeping the last", report.duplicates);

    std::vector<std::string> users;
    std::vector<std::string> objects;
    for (const auto& [key, rating] : records) {
        users.push_back(key.first);
        objects.push_back(key.second);
    }
    const auto unique_sorted = [](std::vector<std::string>& ids) {
        std::sort(ids.begin(), ids.end(), natural_less);
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    };
    unique_sorted(users);
    unique_sorted(objects);
    std::unordered_map<std::string, Index> user_index;
    std::unordered_map<std::string, Index> object_index;
    for (std::size_t i = 0; i < users.size(); ++i) user_index.emplace(users[i], static_cast<Index>(i));
    for (std::size_t a = 0; a < objects.size(); ++a) object_index.emplace(objects[a], static_cast<Index>(a));

    std::vector<RatingEntry> entries;
    entries.reserve(records.size());
    for (const auto& [key, rating] : records)
        entries.push_back({user_index.at(key.first), object_index.at(key.second), rating});
    report.matrix = RatingMatrix(std::move(users), std::move(objects), entries, options.scale);
    return report;
}

LoadReport load_ratings(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return load_ratings(in, options);
}

}  // namespace grouprank
