#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proxident/experiments.hpp"
#include "proxident/identification.hpp"

#include <cmath>

using namespace proxident;

namespace {

const Scenario& fixture(const std::string& name) {
    static const std::vector<Scenario> all = fixtures_2d();
    for (const auto& s : all)
        if (s.name == name) return s;
    throw std::invalid_argument(name);
}

Trace run_algo(const Scenario& s, const std::string& algo, std::size_t budget) {
    return run(s.problem, make_algorithm(algo, budget).config, s.x0);
}

// Gain events: records whose signature holds `m` while the previous one did not.
std::size_t gains(const Trace& tr, ManifoldId m) {
    std::size_t n = 0;
    bool prev = false;
    for (const auto& rec : tr.records) {
        const bool now = rec.signature.contains(m);
        if (now && !prev) ++n;
        prev = now;
    }
    return n;
}

std::size_t losses(const Trace& tr, ManifoldId m) {
    std::size_t n = 0;
    bool prev = false;
    for (const auto& rec : tr.records) {
        const bool now = rec.signature.contains(m);
        if (prev && !now) ++n;
        prev = now;
    }
    return n;
}

} // namespace

TEST_CASE("algorithm table") {
    CHECK(make_algorithm("pg", 10).config.test == AccelerationTest::None);
    CHECK(make_algorithm("apg", 10).config.test == AccelerationTest::AlwaysAccelerate);
    CHECK(make_algorithm("mfista", 10).config.test == AccelerationTest::Monotone);
    CHECK(make_algorithm("t1", 10).config.test == AccelerationTest::T1);
    CHECK(make_algorithm("t2", 7).config.max_prox_steps == 7);
    CHECK_THROWS_AS(make_algorithm("ista", 10), std::invalid_argument);
    CHECK(default_algorithms() == std::vector<std::string>{"pg", "apg", "t1", "t2"});
}

TEST_CASE("generators are deterministic") {
    const Scenario a = gen_lasso(20, 10, 15, 0.01, 3);
    const Scenario b = gen_lasso(20, 10, 15, 0.01, 3);
    const Scenario c = gen_lasso(20, 10, 15, 0.01, 4);
    CHECK(a.problem.smooth().a() == b.problem.smooth().a());
    CHECK(a.problem.smooth().b() == b.problem.smooth().b());
    CHECK(*a.ground_truth == *b.ground_truth);
    CHECK(a.x0 == b.x0);
    CHECK_FALSE(a.problem.smooth().a() == c.problem.smooth().a());

    const Scenario n1 = gen_nuclear(4, 5, 2, 2, 2, 0.01, 8);
    const Scenario n2 = gen_nuclear(4, 5, 2, 2, 2, 0.01, 8);
    CHECK(n1.problem.smooth().b() == n2.problem.smooth().b());
    CHECK(n1.x0 == n2.x0);
}

TEST_CASE("lasso generator") {
    const Scenario s = make_scenario("lasso", 42);
    CHECK(s.problem.dimension() == 128);
    CHECK(s.problem.smooth().a().rows() == 60);
    CHECK(s.problem.lambda() == 0.01);
    std::size_t zeros = 0;
    for (double v : s.ground_truth->raw()) zeros += v == 0.0;
    CHECK(zeros == 120);
    for (double v : s.x0.raw()) {
        CHECK(v >= 0.0);
        CHECK(v < 10.0);
    }
    CHECK(ground_truth_signature(s).size() == 120);
    CHECK(s.algorithms.size() == 4);

    CHECK_THROWS_AS(gen_lasso(10, 5, 10, 0.01, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_lasso(10, 5, 3, -1.0, 1), std::invalid_argument);
}

TEST_CASE("noiseless square lasso recovers the signal") {
    Scenario s = gen_lasso(12, 12, 0, 0.0, 5);
    CHECK(s.problem.lambda() == 0.0);
    const auto ref = compute_reference(s.problem, 1.0 / s.problem.lipschitz(), s.x0);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(ref.point[i] - (*s.ground_truth)[i]) <= 1e-10);
}

TEST_CASE("nuclear generator") {
    const Scenario s = make_scenario("nuclear-small", 42);
    CHECK(s.problem.shape() == VariableShape{6, 7});
    CHECK(s.problem.smooth().a().rows() == 4);
    CHECK(s.problem.candidate_collection().size() == 7);
    CHECK(ground_truth_signature(s) == StructureSignature{ManifoldId::rank_equals(3)});

    const Scenario full = gen_nuclear(3, 4, 2, 2, 3, 0.01, 1);
    CHECK(ground_truth_signature(full) == StructureSignature{ManifoldId::rank_equals(3)});
    CHECK_THROWS_AS(gen_nuclear(3, 4, 2, 2, 4, 0.01, 1), std::invalid_argument);
}

TEST_CASE("group p-ball generator") {
    const Scenario s = make_scenario("group-pball", 42);
    CHECK(s.problem.dimension() == 50);
    CHECK(s.problem.candidate_collection().size() == 10);
    const auto& gt = s.ground_truth->raw();
    for (std::size_t g = 0; g < 10; ++g)
        CHECK(std::abs(norm_p(std::span<const double>(gt.data() + 5 * g, 5), 1.3) - 1.0) <= 1e-12);
    CHECK(ground_truth_signature(s).size() == 10);
    // Noise-free data: the signal zeroes the objective up to the outward
    // rounding nudge on the group norms.
    CHECK(s.problem.value(*s.ground_truth) < 1e-15);

    const Scenario one = gen_group_pball(1, 8, 2.0, 0.01, 2);
    CHECK(one.problem.candidate_collection().size() == 1);
    CHECK(ground_truth_signature(one).size() == 1);
    CHECK_THROWS_AS(gen_group_pball(2, 2, 1.0, 0.01, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_group_pball(2, 2, 1.3, 0.01, 1, 3), std::invalid_argument);
}

TEST_CASE("generated problems are sane") {
    for (const auto& name : scenario_names()) {
        if (name == "nuclear") continue; // same generator as nuclear-small, larger
        const Scenario s = make_scenario(name, 42);
        CHECK(std::isfinite(s.problem.lipschitz()));
        CHECK(s.problem.lipschitz() > 0.0);
        CHECK(s.x0.size() == s.problem.dimension());
        Rng rng(1);
        for (int rep = 0; rep < 20; ++rep) {
            Vector x(s.problem.dimension());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = 10.0 * rng.normal();
            CHECK(s.problem.value(x) >= 0.0);
        }
    }
}

TEST_CASE("scenario catalog") {
    for (const auto& name : scenario_names()) {
        CHECK(default_budget(name) > 0);
        CHECK(make_scenario(name, 1).name == name);
    }
    CHECK_THROWS_AS(make_scenario("nope", 1), std::invalid_argument);
    CHECK_THROWS_AS(default_budget("nope"), std::invalid_argument);
    CHECK_THROWS_AS(ground_truth_signature(fixture("fixture-l1")), std::invalid_argument);
}

TEST_CASE("l1 fixture: pg identifies directly, apg overshoots") {
    const Scenario& s = fixture("fixture-l1");
    const auto ref = compute_reference(s.problem, 1.0 / s.problem.lipschitz(), s.x0);
    REQUIRE(ref.signature.size() == 1);
    const ManifoldId m = ref.signature.members().front();

    const Trace pg = run_algo(s, "pg", 500);
    CHECK(pg.final_signature.contains(m));
    CHECK(gains(pg, m) == 1);
    CHECK(losses(pg, m) == 0);

    const Trace apg = run_algo(s, "apg", 500);
    CHECK(apg.final_signature.contains(m));
    CHECK(losses(apg, m) >= 1);
}

TEST_CASE("1.3-ball fixture: solution on the sphere") {
    const Scenario& s = fixture("fixture-ball13");
    const auto ref = compute_reference(s.problem, 1.0 / s.problem.lipschitz(), s.x0);
    CHECK(ref.signature == StructureSignature{ManifoldId::group_on_sphere(0)});
    CHECK(std::abs(norm_p(ref.point.values(), 1.3) - 1.0) <= 1e-12);
    CHECK(run_algo(s, "pg", 500).final_signature.size() == 1);
}

TEST_CASE("2.6-ball fixture: pg never reaches the sphere, apg does") {
    const Scenario& s = fixture("fixture-ball26");
    const ManifoldId sphere = ManifoldId::group_on_sphere(0);
    const Trace pg = run_algo(s, "pg", 500);
    CHECK(gains(pg, sphere) == 0);
    const Trace apg = run_algo(s, "apg", 500);
    CHECK(gains(apg, sphere) >= 1);
    CHECK(losses(apg, sphere) >= 2);
}

TEST_CASE("run_scenario bundle") {
    Scenario s = make_scenario("fixture-l1", 0);
    const ReportBundle a = run_scenario(s);
    CHECK(a.runs.size() == 4);
    CHECK(a.collection_size == 2);
    CHECK(a.gamma == 1.0 / s.problem.lipschitz());
    for (const auto& r : a.runs) {
        CHECK(r.series.size() == r.trace.records.size());
        for (const auto& rec : r.trace.records) CHECK(rec.f_value >= a.f_star_floor);
    }
    CHECK(a.f_star_floor <= a.reference.f_star);
    CHECK_FALSE(a.ground_truth_signature.has_value());

    const ReportBundle b = run_scenario(s);
    for (std::size_t i = 0; i < a.runs.size(); ++i) CHECK(a.runs[i].trace.final_point == b.runs[i].trace.final_point);

    s.algorithms.clear();
    CHECK_THROWS_AS(run_scenario(s), std::invalid_argument);
}
