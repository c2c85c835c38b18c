#include "proxident/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace proxident {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p-ball regularizer requires p > 1");
}

/// Footnote-style operator for the distance to the unit p-ball, applied in
/// place on one block. Returns true when the output sits on the sphere.
bool pball_prox_block(std::span<double> block, double p, double gamma) {
    const double nrm = norm_p(block, p);
    if (nrm > 1.0 + gamma) {
        const double scale = 1.0 - gamma / nrm;
        for (double& v : block) v *= scale;
        return false;
    }
    if (nrm >= 1.0) {
        for (double& v : block) v /= nrm;
        return true;
    }
    return false;
}

} // namespace

std::uint32_t ManifoldId::narrow(std::size_t i) {
    if (i > std::numeric_limits<std::uint32_t>::max()) throw std::out_of_range("ManifoldId: index too large");
    return static_cast<std::uint32_t>(i);
}

std::string ManifoldId::to_string() const {
    switch (kind) {
    case ManifoldKind::ZeroCoordinate: return "zero[" + std::to_string(index) + "]";
    case ManifoldKind::RankEquals: return "rank=" + std::to_string(index);
    case ManifoldKind::GroupOnSphere: return "sphere[" + std::to_string(index) + "]";
    }
    return "?";
}

StructureSignature::StructureSignature(std::initializer_list<ManifoldId> ids) {
    for (const auto& id : ids) insert(id);
}

void StructureSignature::insert(ManifoldId id) {
    const auto it = std::lower_bound(members_.begin(), members_.end(), id);
    if (it != members_.end() && *it == id) return;
    if (id.kind == ManifoldKind::RankEquals &&
        std::any_of(members_.begin(), members_.end(),
                    [](const ManifoldId& m) { return m.kind == ManifoldKind::RankEquals; })) {
        throw std::invalid_argument("StructureSignature: at most one RankEquals member");
    }
    members_.insert(it, id);
}

bool StructureSignature::contains(ManifoldId id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
}

bool StructureSignature::has_member_outside(const StructureSignature& other) const {
    return count_outside(other) > 0;
}

std::size_t StructureSignature::count_common(const StructureSignature& other) const {
    std::size_t n = 0;
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            ++n;
            ++a;
            ++b;
        }
    }
    return n;
}

std::size_t StructureSignature::count_outside(const StructureSignature& other) const {
    return members_.size() - count_common(other);
}

StructureSignature StructureSignature::restricted_to(const StructureSignature& allowed) const {
    StructureSignature out;
    std::set_intersection(members_.begin(), members_.end(), allowed.members_.begin(), allowed.members_.end(),
                          std::back_inserter(out.members_));
    return out;
}

std::uint64_t StructureSignature::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t value) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (value >> (8 * byte)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(members_.size());
    for (const auto& m : members_) {
        mix(static_cast<std::uint64_t>(m.kind));
        mix(static_cast<std::uint64_t>(m.index));
    }
    return h;
}

Regularizer Regularizer::l1() { return Regularizer(L1Norm{}); }

Regularizer Regularizer::nuclear(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("nuclear norm: empty shape");
    return Regularizer(NuclearNorm{rows, cols});
}

Regularizer Regularizer::dist_pball(double p) {
    require_p(p);
    return Regularizer(DistPBall{p});
}

Regularizer Regularizer::group_dist_pball(double p, std::vector<IndexRange> groups) {
    require_p(p);
    if (groups.empty()) throw std::invalid_argument("group p-ball: no groups");
    std::size_t expected = 0;
    for (const auto& g : groups) {
        if (g.begin != expected || g.end <= g.begin) {
            throw std::invalid_argument("group p-ball: groups must be consecutive, nonempty and cover [0, n)");
        }
        expected = g.end;
    }
    return Regularizer(GroupDistPBall{p, std::move(groups)});
}

Regularizer Regularizer::group_dist_pball(double p, std::size_t count, std::size_t size) {
    std::vector<IndexRange> groups;
    for (std::size_t g = 0; g < count; ++g) groups.push_back({g * size, (g + 1) * size});
    return group_dist_pball(p, std::move(groups));
}

std::string Regularizer::name() const {
    return std::visit(overloaded{
                          [](const L1Norm&) { return std::string("l1"); },
                          [](const NuclearNorm&) { return std::string("nuclear"); },
                          [](const DistPBall& b) { return "dist-pball(p=" + std::to_string(b.p) + ")"; },
                          [](const GroupDistPBall& b) {
                              return "group-dist-pball(p=" + std::to_string(b.p) + ", groups=" +
                                     std::to_string(b.groups.size()) + ")";
                          },
                      },
                      variant_);
}

std::optional<std::size_t> Regularizer::dimension() const {
    return std::visit(overloaded{
                          [](const L1Norm&) -> std::optional<std::size_t> { return std::nullopt; },
                          [](const NuclearNorm& n) -> std::optional<std::size_t> { return n.rows * n.cols; },
                          [](const DistPBall&) -> std::optional<std::size_t> { return std::nullopt; },
                          [](const GroupDistPBall& g) -> std::optional<std::size_t> { return g.groups.back().end; },
                      },
                      variant_);
}

void Regularizer::check_dimension(std::size_t n) const {
    if (n == 0) throw std::invalid_argument(name() + ": empty point");
    if (const auto d = dimension(); d && *d != n) {
        throw std::invalid_argument(name() + ": expected dimension " + std::to_string(*d) + ", got " +
                                    std::to_string(n));
    }
}

double Regularizer::evaluate(const Vector& x) const {
    check_dimension(x.size());
    return std::visit(overloaded{
                          [&](const L1Norm&) {
                              double acc = 0.0;
                              for (double v : x.values()) acc += std::abs(v);
                              return acc;
                          },
                          [&](const NuclearNorm& n) {
                              const SvdResult s = svd(reshape(x, n.rows, n.cols));
                              double acc = 0.0;
                              for (double v : s.singulars.values()) acc += v;
                              return acc;
                          },
                          [&](const DistPBall& b) { return std::max(0.0, norm_p(x.values(), b.p) - 1.0); },
                          [&](const GroupDistPBall& b) {
                              double acc = 0.0;
                              for (const auto& g : b.groups) {
                                  acc += std::max(0.0, norm_p(x.values().subspan(g.begin, g.end - g.begin), b.p) - 1.0);
                              }
                              return acc;
                          },
                      },
                      variant_);
}

ProxResult Regularizer::prox(const Vector& u, double gamma_eff) const {
    if (!(gamma_eff > 0.0)) throw std::invalid_argument("prox: gamma_eff must be positive");
    check_dimension(u.size());
    return std::visit(
        overloaded{
            [&](const L1Norm&) {
                ProxResult r{u, {}};
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double ui = u[i];
                    if (ui >= -gamma_eff && ui <= gamma_eff) {
                        r.point[i] = 0.0;
                        r.signature.insert(ManifoldId::zero_coordinate(i));
                    } else {
                        r.point[i] = ui > 0 ? ui - gamma_eff : ui + gamma_eff;
                    }
                }
                return r;
            },
            [&](const NuclearNorm& n) {
                SvdResult s = svd(reshape(u, n.rows, n.cols));
                const double floor = kNuclearRankFloor * s.singulars[0];
                std::size_t rank = 0;
                for (double& sv : s.singulars.values()) {
                    const double shrunk = sv - gamma_eff;
                    if (shrunk > floor && shrunk > 0.0) {
                        sv = shrunk;
                        ++rank;
                    } else {
                        sv = 0.0;
                    }
                }
                return ProxResult{flatten(reconstruct(s)), {ManifoldId::rank_equals(rank)}};
            },
            [&](const DistPBall& b) {
                ProxResult r{u, {}};
                if (pball_prox_block(r.point.values(), b.p, gamma_eff)) {
                    r.signature.insert(ManifoldId::group_on_sphere(0));
                }
                return r;
            },
            [&](const GroupDistPBall& b) {
                ProxResult r{u, {}};
                for (std::size_t g = 0; g < b.groups.size(); ++g) {
                    const auto& range = b.groups[g];
                    if (pball_prox_block(r.point.values().subspan(range.begin, range.end - range.begin), b.p,
                                         gamma_eff)) {
                        r.signature.insert(ManifoldId::group_on_sphere(g));
                    }
                }
                return r;
            },
        },
        variant_);
}

std::vector<ManifoldId> Regularizer::candidate_collection(std::size_t dim) const {
    check_dimension(dim);
    std::vector<ManifoldId> out;
    std::visit(overloaded{
                   [&](const L1Norm&) {
                       for (std::size_t i = 0; i < dim; ++i) out.push_back(ManifoldId::zero_coordinate(i));
                   },
                   [&](const NuclearNorm& n) {
                       for (std::size_t r = 0; r <= std::min(n.rows, n.cols); ++r)
                           out.push_back(ManifoldId::rank_equals(r));
                   },
                   [&](const DistPBall&) { out.push_back(ManifoldId::group_on_sphere(0)); },
                   [&](const GroupDistPBall& b) {
                       for (std::size_t g = 0; g < b.groups.size(); ++g) out.push_back(ManifoldId::group_on_sphere(g));
                   },
               },
               variant_);
    return out;
}

} // namespace proxident
