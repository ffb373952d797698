#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace grouprank {

using Index = Eigen::Index;
using Rating = int;

/// Ordered set of allowed discrete ratings, default {1,2,3,4,5}.
class RatingScale {
public:
    RatingScale();
    explicit RatingScale(std::vector<Rating> levels);
    static RatingScale range(Rating lowest, Rating highest);

    std::size_t size() const noexcept { return levels_.size(); }
    Rating min() const noexcept { return levels_.front(); }
    Rating max() const noexcept { return levels_.back(); }
    Rating level(std::size_t s) const { return levels_.at(s); }
    std::span<const Rating> levels() const noexcept { return levels_; }

    /// Position s of `value` in the scale, if it is a member.
    std::optional<std::size_t> index_of(Rating value) const noexcept;
    bool contains(Rating value) const noexcept { return index_of(value).has_value(); }

    bool operator==(const RatingScale&) const = default;

private:
    std::vector<Rating> levels_;
};

struct RatingEntry {
    Index user;
    Index object;
    Rating rating;

    bool operator==(const RatingEntry&) const = default;
};

/// Weighted bipartite user-object network. Immutable after construction.
///
/// Users and objects carry dense 0-based indices; the original identifiers are
/// kept for reporting. Both a row-major (per user) and a column-major (per
/// object) view of the same sparse pattern are held, since the ranking methods
/// sweep along both axes.
class RatingMatrix {
public:
    using UserMajor = Eigen::SparseMatrix<Rating, Eigen::RowMajor>;
    using ObjectMajor = Eigen::SparseMatrix<Rating, Eigen::ColMajor>;

    RatingMatrix();

    /// Throws UsageError on out-of-range indices or a repeated (user, object)
    /// pair, RatingDomainError on a rating outside `scale`.
    RatingMatrix(std::vector<std::string> user_ids, std::vector<std::string> object_ids,
                 std::span<const RatingEntry> entries, RatingScale scale = {});

    Index users() const noexcept { return by_user_.rows(); }
    Index objects() const noexcept { return by_user_.cols(); }
    Index ratings() const noexcept { return by_user_.nonZeros(); }
    bool empty() const noexcept { return ratings() == 0; }

    Index user_degree(Index user) const;
    Index object_degree(Index object) const;
    Eigen::VectorXi user_degrees() const;
    Eigen::VectorXi object_degrees() const;

    const UserMajor& by_user() const noexcept { return by_user_; }
    const ObjectMajor& by_object() const noexcept { return by_object_; }
    const RatingScale& scale() const noexcept { return scale_; }

    const std::string& user_id(Index user) const { return user_ids_.at(static_cast<std::size_t>(user)); }
    const std::string& object_id(Index object) const { return object_ids_.at(static_cast<std::size_t>(object)); }
    std::span<const std::string> user_ids() const noexcept { return user_ids_; }
    std::span<const std::string> object_ids() const noexcept { return object_ids_; }

    /// Entries in row-major order (by user, then object).
    std::vector<RatingEntry> entries() const;

    /// Hash of dimensions and entries; used to check that derived tables
    /// belong to this matrix.
    std::uint64_t fingerprint() const noexcept { return fingerprint_; }

    bool operator==(const RatingMatrix& other) const;

private:
    std::vector<std::string> user_ids_;
    std::vector<std::string> object_ids_;
    RatingScale scale_;
    UserMajor by_user_;
    ObjectMajor by_object_;
    std::uint64_t fingerprint_ = 0;
};

/// Table 1 style summary of a rating network.
struct DatasetStats {
    Index users = 0;
    Index objects = 0;
    Index ratings = 0;
    double mean_user_degree = 0.0;
    double mean_object_degree = 0.0;
    /// l / (m n); 0 for an empty matrix.
    double sparsity = 0.0;
};

DatasetStats stats(const RatingMatrix& matrix);

/// Keeps users with at least `min_user_degree` ratings and the objects rated by
/// at least one of them. One pass: dropping an object never lowers the degree
/// of a retained user, so the result is already a fixed point.
RatingMatrix filter_core(const RatingMatrix& matrix, Index min_user_degree);

enum class Delimiter { automatic, tab, comma };

struct LoadOptions {
    Delimiter delimiter = Delimiter::automatic;
    RatingScale scale;
};

struct LoadReport {
    RatingMatrix matrix;
    std::size_t records = 0;
    /// Records that overwrote an earlier rating for the same pair.
    std::size_t duplicates = 0;
    bool header_skipped = false;
};

/// Reads `user, object, rating[, ignored...]` records.
///
/// Indices are assigned in natural identifier order (numeric when both ids are
/// integers, lexicographic otherwise), so the result does not depend on record
/// order apart from last-wins resolution of duplicate pairs.
LoadReport load_ratings(std::istream& in, const LoadOptions& options = {});
LoadReport load_ratings(const std::filesystem::path& path, const LoadOptions& options = {});

/// Strict weak order on identifiers: integers numerically, then everything
/// else lexicographically.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace grouprank
