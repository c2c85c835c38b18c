#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proxident/experiments.hpp"
#include "proxident/identification.hpp"

#include <cmath>

using namespace proxident;

namespace {

std::vector<IdentificationPoint> series_of(const std::vector<std::pair<std::size_t, std::size_t>>& counts) {
    std::vector<IdentificationPoint> out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        out.push_back(IdentificationPoint{i + 1, i + 1, counts[i].first, counts[i].second});
    return out;
}

} // namespace

TEST_CASE("reference on the one-dimensional example") {
    const CompositeProblem p(LeastSquares(Matrix::identity(1), Vector{1.0}, 0.5), Regularizer::l1(), 1.0);
    for (double x0 : {-1.0, 1.0, 7.0}) {
        const auto ref = compute_reference(p, 1.0, Vector{x0});
        CHECK(ref.point[0] == 0.0);
        CHECK(ref.f_star == 0.5);
        CHECK(ref.signature == StructureSignature{ManifoldId::zero_coordinate(0)});
        CHECK(ref.converged);
    }
}

TEST_CASE("reference interpolates an unregularized square system") {
    Rng rng(19);
    Matrix a(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) a(i, j) = rng.normal() + (i == j ? 4.0 : 0.0);
    Vector b(6);
    for (std::size_t i = 0; i < 6; ++i) b[i] = rng.normal();
    const CompositeProblem p(LeastSquares(a, b), Regularizer::l1(), 0.0);
    const auto ref = compute_reference(p, 1.0 / p.lipschitz(), Vector(6));
    CHECK(p.value(ref.point) < 1e-20);
    CHECK(ref.signature.empty());
}

TEST_CASE("reference is deterministic") {
    const Scenario s = make_scenario("lasso", 42);
    const double gamma = 1.0 / s.problem.lipschitz();
    const auto a = compute_reference(s.problem, gamma, s.x0);
    const auto b = compute_reference(s.problem, gamma, s.x0);
    CHECK(a.f_star == b.f_star);
    CHECK(a.point == b.point);
    CHECK(a.signature == b.signature);
    CHECK(a.converged);
    // f_star is the best value seen; the returned point is the last polish step.
    CHECK(a.f_star <= s.problem.value(a.point));
    CHECK(s.problem.value(a.point) - a.f_star <= 1e-12 * a.f_star);
}

TEST_CASE("reference option guards") {
    const CompositeProblem p(LeastSquares(Matrix::identity(1), Vector{1.0}, 0.5), Regularizer::l1(), 1.0);
    ReferenceOptions o;
    o.target_subopt = 0.0;
    CHECK_THROWS_AS(compute_reference(p, 1.0, Vector{1.0}, o), std::invalid_argument);
    o = ReferenceOptions{};
    o.budget = 0;
    CHECK_THROWS_AS(compute_reference(p, 1.0, Vector{1.0}, o), std::invalid_argument);
}

TEST_CASE("identification series counts") {
    const StructureSignature target{ManifoldId::zero_coordinate(0), ManifoldId::zero_coordinate(2)};
    Trace tr;
    auto rec = [](std::size_t k, StructureSignature s) {
        return IterationRecord{k, k, 0.0, std::move(s), true, false, 0.0, 0.0, 1.0};
    };
    tr.records.push_back(rec(1, {}));
    tr.records.push_back(rec(2, {ManifoldId::zero_coordinate(0), ManifoldId::zero_coordinate(1)}));
    tr.records.push_back(rec(3, target));
    const auto s = identification_series(tr, target);
    REQUIRE(s.size() == 3);
    CHECK(s[0].correct == 0);
    CHECK(s[0].spurious == 0);
    CHECK(s[1].correct == 1);
    CHECK(s[1].spurious == 1);
    CHECK(s[2].correct == 2);
    CHECK(s[2].spurious == 0);
    CHECK(s[2].prox_steps == 3);
}

TEST_CASE("stability metrics") {
    // Monotone: no holes.
    const auto mono = stability_metrics(series_of({{0, 0}, {1, 0}, {2, 0}, {2, 0}}), 2);
    CHECK(mono.first_full_identification == 3u);
    CHECK(mono.holes_after_first == 0);

    // Identified at step 100, lost over steps 120..130.
    std::vector<std::pair<std::size_t, std::size_t>> counts(200, {3, 0});
    for (std::size_t i = 0; i < 99; ++i) counts[i] = {1, 0};
    for (std::size_t i = 119; i < 130; ++i) counts[i] = {2, 0};
    const auto holes = stability_metrics(series_of(counts), 3);
    CHECK(holes.first_full_identification == 100u);
    CHECK(holes.holes_after_first == 11);

    // Spurious members block identification.
    const auto spur = stability_metrics(series_of({{2, 1}, {2, 1}}), 2);
    CHECK_FALSE(spur.first_full_identification.has_value());
    CHECK(spur.holes_after_first == 0);

    CHECK_THROWS_AS(stability_metrics({}, 1), std::invalid_argument);
}

TEST_CASE("series stay within bounds on a lasso run") {
    const Scenario s = make_scenario("lasso-strong", 42);
    const double gamma = 1.0 / s.problem.lipschitz();
    const auto ref = compute_reference(s.problem, gamma, s.x0);
    const std::size_t n_coll = s.problem.candidate_collection().size();
    SolverConfig cfg;
    cfg.max_prox_steps = 3000;
    const Trace tr = run_pg(s.problem, cfg, s.x0);
    const auto series = identification_series(tr, ref.signature);
    for (const auto& pt : series) {
        CHECK(pt.correct <= ref.signature.size());
        CHECK(pt.spurious <= n_coll - ref.signature.size());
    }
    // PG on a qualified, well-conditioned instance settles on the structure.
    const auto m = stability_metrics(series, ref.signature.size());
    REQUIRE(m.first_full_identification.has_value());
    CHECK(m.holes_after_first == 0);
    CHECK(series.back().correct == ref.signature.size());
}
