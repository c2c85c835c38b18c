#pragma once

#include "proxident/linalg.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace proxident {

enum class ManifoldKind : std::uint8_t { ZeroCoordinate, RankEquals, GroupOnSphere };

/// One candidate manifold of a collection: {x : x_i = 0}, {X : rank X = r},
/// or {x : ||x_group||_p = 1}.
struct ManifoldId {
    ManifoldKind kind;
    std::uint32_t index;

    static ManifoldId zero_coordinate(std::size_t i) { return {ManifoldKind::ZeroCoordinate, narrow(i)}; }
    static ManifoldId rank_equals(std::size_t r) { return {ManifoldKind::RankEquals, narrow(r)}; }
    static ManifoldId group_on_sphere(std::size_t g) { return {ManifoldKind::GroupOnSphere, narrow(g)}; }

    auto operator<=>(const ManifoldId&) const = default;
    std::string to_string() const;

private:
    static std::uint32_t narrow(std::size_t i);
};

/// Set of manifolds certified by a prox evaluation. Kept sorted.
class StructureSignature {
public:
    StructureSignature() = default;
    StructureSignature(std::initializer_list<ManifoldId> ids);

    /// Throws std::invalid_argument when adding a second RankEquals element.
    void insert(ManifoldId id);

    bool contains(ManifoldId id) const;
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    const std::vector<ManifoldId>& members() const { return members_; }

    /// True when this set holds some manifold that `other` lacks.
    bool has_member_outside(const StructureSignature& other) const;
    std::size_t count_common(const StructureSignature& other) const;
    std::size_t count_outside(const StructureSignature& other) const;

    /// Intersection with `allowed`.
    StructureSignature restricted_to(const StructureSignature& allowed) const;

    /// FNV-1a over the sorted member list; stable across runs and platforms.
    std::uint64_t hash() const;

    bool operator==(const StructureSignature&) const = default;

private:
    std::vector<ManifoldId> members_;
};

struct ProxResult {
    Vector point;
    StructureSignature signature;
};

/// Half-open coordinate range [begin, end).
struct IndexRange {
    std::size_t begin;
    std::size_t end;
    bool operator==(const IndexRange&) const = default;
};

struct L1Norm {};
/// Nuclear norm of a rows x cols matrix stored row-major.
struct NuclearNorm {
    std::size_t rows;
    std::size_t cols;
};
/// max(0, ||x||_p - 1)
struct DistPBall {
    double p;
};
/// sum over groups of max(0, ||x_g||_p - 1)
struct GroupDistPBall {
    double p;
    std::vector<IndexRange> groups;
};

/// Unweighted nonsmooth term g. Call sites pass gamma * lambda to prox.
class Regularizer {
public:
    using Variant = std::variant<L1Norm, NuclearNorm, DistPBall, GroupDistPBall>;

    static Regularizer l1();
    static Regularizer nuclear(std::size_t rows, std::size_t cols);
    static Regularizer dist_pball(double p);
    /// Throws std::invalid_argument unless the groups partition [0, n).
    static Regularizer group_dist_pball(double p, std::vector<IndexRange> groups);
    /// `count` consecutive groups of `size` coordinates each.
    static Regularizer group_dist_pball(double p, std::size_t count, std::size_t size);

    const Variant& variant() const { return variant_; }
    std::string name() const;

    /// Fixed dimension imposed by the regularizer, if any.
    std::optional<std::size_t> dimension() const;

    double evaluate(const Vector& x) const;
    ProxResult prox(const Vector& u, double gamma_eff) const;
    std::vector<ManifoldId> candidate_collection(std::size_t dim) const;

private:
    explicit Regularizer(Variant v) : variant_(std::move(v)) {}
    void check_dimension(std::size_t n) const;

    Variant variant_;
};

/// Singular values below this fraction of the largest one count as zero
/// after soft-thresholding in the nuclear-norm prox.
inline constexpr double kNuclearRankFloor = 1e-12;

} // namespace proxident
