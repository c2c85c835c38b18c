#pragma once

#include "proxident/identification.hpp"
#include "proxident/smooth.hpp"
#include "proxident/solvers.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace proxident {

struct AlgorithmSpec {
    std::string name; // pg, apg, mfista, t1, t2
    SolverConfig config;
};

/// Solver config for one of the named algorithms.
AlgorithmSpec make_algorithm(const std::string& name, std::size_t budget);

/// The default comparison set: pg, apg, t1, t2.
std::vector<std::string> default_algorithms();

struct Scenario {
    std::string name;
    CompositeProblem problem;
    Vector x0;
    std::optional<Vector> ground_truth;
    std::vector<AlgorithmSpec> algorithms;
    ReferenceOptions reference;
};

/// Lasso: A (m x n) standard normal, s with n - zeros standard normal
/// entries at random positions, b = A s + e with e ~ N(0, delta^2),
/// lambda = delta, x_0 uniform in [0, 10]^n.
Scenario gen_lasso(std::size_t n, std::size_t m, std::size_t zeros, double delta, std::uint64_t seed);

/// Nuclear-norm least squares on rows x cols matrices measured by a dense
/// (mrows*mcols) x (rows*cols) Gaussian operator; s = L R with inner
/// dimension `rank`; lambda = delta; x_0 standard normal.
Scenario gen_nuclear(std::size_t rows, std::size_t cols, std::size_t mrows, std::size_t mcols, std::size_t rank,
                     double delta, std::uint64_t seed);

/// Least squares plus a sum of per-group distances to the unit p-ball. The
/// ground truth has every group on its p-sphere. `measurements` = 0 selects a
/// square operator.
Scenario gen_group_pball(std::size_t groups, std::size_t group_size, double p, double delta, std::uint64_t seed,
                         std::size_t measurements = 0);

/// Frozen 2-D problems: l1, distance to the 1.3-ball, distance to the 2.6-ball.
std::vector<Scenario> fixtures_2d();

/// min 1/2 (x - 1)^2 + |x| started at x0.
Scenario remark2_scenario(double x0);

/// Signature certified by the regularizer's prox at the ground truth with a
/// vanishing threshold.
StructureSignature ground_truth_signature(const Scenario& s);

/// Catalog lookup used by the CLI. Throws std::invalid_argument for unknown names.
Scenario make_scenario(const std::string& name, std::uint64_t seed);
std::vector<std::string> scenario_names();
/// Prox-step budget each catalog scenario uses unless overridden.
std::size_t default_budget(const std::string& name);

struct AlgorithmRun {
    std::string name;
    Trace trace;
    std::vector<IdentificationPoint> series;
    StabilityMetrics stability;
    std::size_t ground_truth_common = 0; // |final signature ∩ ground-truth signature|
};

struct ReportBundle {
    std::string scenario;
    ReferenceSolution reference;
    /// min of the reference value and every value any run attained.
    double f_star_floor = 0.0;
    std::vector<AlgorithmRun> runs;
    std::optional<StructureSignature> ground_truth_signature;
    std::size_t collection_size = 0;
    double gamma = 0.0;
    double lipschitz = 0.0;
};

ReportBundle run_scenario(const Scenario& s);

} // namespace proxident
