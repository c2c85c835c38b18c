#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "proxident/regularizers.hpp"

#include <cmath>

using namespace proxident;

namespace {

Vector random_vector(std::size_t n, double sd, Rng& rng) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = sd * rng.normal();
    return v;
}

// Nuclear norm through the test-only eigenvalue oracle on u uᵀ (the smaller
// Gram matrix, so no zero eigenvalue feeds noise through the square root).
double oracle_nuclear(const Vector& x, std::size_t rows, std::size_t cols) {
    std::vector<double> t(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = x[i * cols + j];
    const auto ev = oracle::symmetric_eigenvalues(oracle::gram(t, cols, rows), rows);
    double s = 0.0;
    for (double e : ev) s += std::sqrt(std::max(e, 0.0));
    return s;
}

std::vector<Regularizer> all_regularizers() {
    return {Regularizer::l1(), Regularizer::nuclear(3, 4), Regularizer::dist_pball(1.3), Regularizer::dist_pball(2.6),
            Regularizer::group_dist_pball(1.3, 4, 3)};
}

// Operators whose closed form is the exact prox. For p != 2 the radial ball
// formula is kept as stated even though it is not the Euclidean prox.
std::vector<Regularizer> exact_regularizers() {
    return {Regularizer::l1(), Regularizer::nuclear(3, 4), Regularizer::dist_pball(2.0),
            Regularizer::group_dist_pball(2.0, 4, 3)};
}

double moreau(const Regularizer& g, const Vector& w, const Vector& u, double gamma) {
    return g.evaluate(w) + squared_distance(w, u) / (2.0 * gamma);
}

} // namespace

TEST_CASE("evaluate") {
    CHECK(Regularizer::l1().evaluate(Vector{2.0, -0.3, -1.0}) == doctest::Approx(3.3).epsilon(1e-15));
    CHECK(Regularizer::dist_pball(2.0).evaluate(Vector{0.0, 3.0}) == doctest::Approx(2.0));
    CHECK(Regularizer::dist_pball(2.0).evaluate(Vector{0.3, 0.4}) == 0.0);
    CHECK(Regularizer::nuclear(2, 2).evaluate(Vector{3.0, 0.0, 0.0, 0.4}) == doctest::Approx(3.4).epsilon(1e-12));

    const auto grp = Regularizer::group_dist_pball(2.0, 2, 2);
    CHECK(grp.evaluate(Vector{3.0, 4.0, 0.1, 0.1}) == doctest::Approx(4.0));

    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        const Vector x = random_vector(12, 1.0, rng);
        CHECK(Regularizer::nuclear(3, 4).evaluate(x) == doctest::Approx(oracle_nuclear(x, 3, 4)).epsilon(1e-10));
    }
}

TEST_CASE("evaluate rejects a wrong dimension") {
    CHECK_THROWS_AS(Regularizer::nuclear(2, 2).evaluate(Vector{1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::group_dist_pball(1.3, 2, 2).evaluate(Vector{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::l1().evaluate(Vector{}), std::invalid_argument);
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(Regularizer::dist_pball(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::group_dist_pball(1.3, {{0, 2}, {3, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(Regularizer::group_dist_pball(1.3, {{0, 3}, {2, 4}}), std::invalid_argument);
    CHECK_NOTHROW(Regularizer::group_dist_pball(1.3, {{0, 2}, {2, 5}}));
}

TEST_CASE("l1 prox example") {
    const auto r = Regularizer::l1().prox(Vector{2.0, -0.3, -1.0}, 0.5);
    CHECK(r.point == Vector{1.5, 0.0, -0.5});
    // The zero lands in the middle coordinate (index 1).
    CHECK(r.signature == StructureSignature{ManifoldId::zero_coordinate(1)});
}

TEST_CASE("l1 prox treats the threshold as structured") {
    const auto r = Regularizer::l1().prox(Vector{0.5, -0.5, 0.5000001}, 0.5);
    CHECK(r.signature.size() == 2);
    CHECK_FALSE(r.signature.contains(ManifoldId::zero_coordinate(2)));
}

TEST_CASE("dist-pball prox branches") {
    const auto ball = Regularizer::dist_pball(2.0);

    const auto mid = ball.prox(Vector{0.0, 1.2}, 0.5);
    CHECK(mid.point[0] == 0.0);
    CHECK(mid.point[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mid.signature == StructureSignature{ManifoldId::group_on_sphere(0)});

    const auto inside = ball.prox(Vector{0.3, 0.4}, 0.5);
    CHECK(inside.point == Vector{0.3, 0.4});
    CHECK(inside.signature.empty());

    const auto outside = ball.prox(Vector{0.0, 3.0}, 0.5);
    CHECK(outside.point[1] == doctest::Approx(2.5));
    CHECK(outside.signature.empty());

    // Ties go to the sphere branch.
    CHECK(ball.prox(Vector{0.0, 1.0}, 0.5).signature.size() == 1);
    CHECK(ball.prox(Vector{0.0, 1.5}, 0.5).signature.size() == 1);
}

TEST_CASE("group prox applies the ball rule per group") {
    const auto g = Regularizer::group_dist_pball(2.0, 3, 2);
    const auto r = g.prox(Vector{0.0, 1.2, 0.3, 0.4, 0.0, 3.0}, 0.5);
    CHECK(r.signature == StructureSignature{ManifoldId::group_on_sphere(0)});
    CHECK(r.point[1] == doctest::Approx(1.0));
    CHECK(r.point[2] == 0.3);
    CHECK(r.point[5] == doctest::Approx(2.5));
}

TEST_CASE("nuclear prox example") {
    const auto r = Regularizer::nuclear(2, 2).prox(Vector{3.0, 0.0, 0.0, 0.4}, 0.5);
    CHECK(r.signature == StructureSignature{ManifoldId::rank_equals(1)});
    CHECK(r.point[0] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(r.point[1]) < 1e-12);
    CHECK(std::abs(r.point[2]) < 1e-12);
    CHECK(std::abs(r.point[3]) < 1e-12);
}

TEST_CASE("prox rejects nonpositive steps") {
    for (const auto& g : all_regularizers()) {
        const Vector u(g.dimension().value_or(12), 1.0);
        CHECK_THROWS_AS(g.prox(u, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(g.prox(u, -1.0), std::invalid_argument);
    }
}

TEST_CASE("candidate collections") {
    CHECK(Regularizer::l1().candidate_collection(3).size() == 3);
    const auto nuc = Regularizer::nuclear(6, 7).candidate_collection(42);
    REQUIRE(nuc.size() == 7);
    CHECK(nuc.front() == ManifoldId::rank_equals(0));
    CHECK(nuc.back() == ManifoldId::rank_equals(6));
    CHECK(Regularizer::group_dist_pball(1.3, 10, 5).candidate_collection(50).size() == 10);
    CHECK(Regularizer::dist_pball(2.6).candidate_collection(2).size() == 1);
}

TEST_CASE("l1 prox agrees with a scalar grid minimizer") {
    Rng rng(11);
    const double gamma = 0.7;
    for (int rep = 0; rep < 50; ++rep) {
        const double u = 3.0 * rng.normal();
        const double w = Regularizer::l1().prox(Vector{u}, gamma).point[0];
        const double grid = oracle::grid_argmin(
            [&](double v) { return std::abs(v) + (v - u) * (v - u) / (2.0 * gamma); }, -12.0, 12.0, 240001);
        CHECK(std::abs(w - grid) <= 1e-4);
    }
}

TEST_CASE("prox optimality against random competitors") {
    Rng rng(5);
    for (const auto& g : exact_regularizers()) {
        const std::size_t n = g.dimension().value_or(12);
        for (int rep = 0; rep < 40; ++rep) {
            const double gamma = 0.05 + rng.uniform();
            const Vector u = random_vector(n, 1.5, rng);
            const auto p = g.prox(u, gamma);
            const double best = moreau(g, p.point, u, gamma);
            for (int c = 0; c < 10; ++c) {
                Vector w = p.point;
                w += random_vector(n, c < 5 ? 1e-3 : 1.0, rng);
                CHECK(best <= moreau(g, w, u, gamma) + 1e-10);
            }
        }
    }
}

TEST_CASE("prox is nonexpansive") {
    Rng rng(8);
    for (const auto& g : exact_regularizers()) {
        const std::size_t n = g.dimension().value_or(12);
        for (int rep = 0; rep < 50; ++rep) {
            const double gamma = 0.05 + rng.uniform();
            const Vector u = random_vector(n, 1.5, rng);
            const Vector v = random_vector(n, 1.5, rng);
            CHECK(norm2(g.prox(u, gamma).point - g.prox(v, gamma).point) <= norm2(u - v) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("p != 2 ball prox is the radial formula") {
    Rng rng(21);
    for (double p : {1.3, 2.6}) {
        const auto ball = Regularizer::dist_pball(p);
        for (int rep = 0; rep < 50; ++rep) {
            const double gamma = 0.05 + rng.uniform();
            const Vector u = random_vector(3, 1.0, rng);
            const double nu = norm_p(u.values(), p);
            const auto r = ball.prox(u, gamma);
            const double scale = nu < 1.0 ? 1.0 : (nu <= 1.0 + gamma ? 1.0 / nu : 1.0 - gamma / nu);
            for (std::size_t i = 0; i < 3; ++i) CHECK(r.point[i] == doctest::Approx(scale * u[i]).epsilon(1e-14));
            CHECK(r.signature.empty() == (nu < 1.0 || nu > 1.0 + gamma));
        }
    }
}

TEST_CASE("signatures are sound") {
    Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        const double gamma = 0.05 + rng.uniform();

        const Vector u = random_vector(12, 1.0, rng);
        const auto l1 = Regularizer::l1().prox(u, gamma);
        for (std::size_t i = 0; i < 12; ++i)
            CHECK(l1.signature.contains(ManifoldId::zero_coordinate(i)) == (l1.point[i] == 0.0));

        const auto nuc = Regularizer::nuclear(3, 4).prox(u, gamma);
        REQUIRE(nuc.signature.size() == 1);
        const auto ev = oracle::symmetric_eigenvalues(oracle::gram(nuc.point.raw(), 3, 4), 4);
        std::size_t rank = 0;
        for (double e : ev)
            if (std::sqrt(std::max(e, 0.0)) > 1e-6 * (1.0 + std::sqrt(std::max(ev[0], 0.0)))) ++rank;
        CHECK(nuc.signature.members()[0] == ManifoldId::rank_equals(rank));

        const auto grp = Regularizer::group_dist_pball(1.3, 4, 3).prox(u, gamma);
        for (std::size_t gi = 0; gi < 4; ++gi) {
            if (!grp.signature.contains(ManifoldId::group_on_sphere(gi))) continue;
            const std::span<const double> part(grp.point.raw().data() + 3 * gi, 3);
            CHECK(std::abs(norm_p(part, 1.3) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("signature set operations and hash") {
    const StructureSignature a{ManifoldId::zero_coordinate(3), ManifoldId::zero_coordinate(1)};
    const StructureSignature b{ManifoldId::zero_coordinate(1)};
    CHECK(a.has_member_outside(b));
    CHECK_FALSE(b.has_member_outside(a));
    CHECK(a.count_common(b) == 1);
    CHECK(a.count_outside(b) == 1);
    CHECK(a.restricted_to(b) == b);
    CHECK(a.members().front() == ManifoldId::zero_coordinate(1));
    CHECK(a.hash() == StructureSignature{ManifoldId::zero_coordinate(1), ManifoldId::zero_coordinate(3)}.hash());
    CHECK(a.hash() != b.hash());

    StructureSignature r{ManifoldId::rank_equals(2)};
    CHECK_THROWS_AS(r.insert(ManifoldId::rank_equals(3)), std::invalid_argument);
}
