#include "proxident/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace proxident {

namespace {
// Threshold for the prox that certifies the ground-truth structure: small
// enough to leave nonzeros and nonzero singular values alone, large enough to
// absorb rounding in zero singular values and unit group norms.
constexpr double kGroundTruthThreshold = 1e-12;
} // namespace

AlgorithmSpec make_algorithm(const std::string& name, std::size_t budget) {
    AlgorithmSpec spec;
    spec.name = name;
    spec.config.max_prox_steps = budget;
    if (name == "pg") {
        spec.config.test = AccelerationTest::None;
    } else if (name == "apg") {
        spec.config.test = AccelerationTest::AlwaysAccelerate;
    } else if (name == "mfista") {
        spec.config.test = AccelerationTest::Monotone;
    } else if (name == "t1") {
        spec.config.test = AccelerationTest::T1;
    } else if (name == "t2") {
        spec.config.test = AccelerationTest::T2;
    } else {
        throw std::invalid_argument("unknown algorithm '" + name + "'");
    }
    return spec;
}

std::vector<std::string> default_algorithms() { return {"pg", "apg", "t1", "t2"}; }

namespace {

std::vector<AlgorithmSpec> default_specs(std::size_t budget) {
    std::vector<AlgorithmSpec> out;
    for (const auto& name : default_algorithms()) out.push_back(make_algorithm(name, budget));
    return out;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

Vector gaussian_vector(std::size_t n, double sd, Rng& rng) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = sd * rng.normal();
    return v;
}

} // namespace

Scenario gen_lasso(std::size_t n, std::size_t m, std::size_t zeros, double delta, std::uint64_t seed) {
    if (n == 0 || m == 0) throw std::invalid_argument("gen_lasso: empty dimensions");
    if (zeros >= n) throw std::invalid_argument("gen_lasso: zeros must be < n");
    if (!(delta >= 0.0)) throw std::invalid_argument("gen_lasso: delta must be >= 0");

    Rng rng(seed);
    Matrix a = gaussian_matrix(m, n, rng);

    // Support: partial Fisher-Yates over the coordinates.
    const std::size_t nnz = n - zeros;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < nnz; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    Vector s(n);
    for (std::size_t i = 0; i < nnz; ++i) s[idx[i]] = rng.normal();

    Vector b = multiply(a, s);
    b += gaussian_vector(m, delta, rng);

    Vector x0(n);
    for (std::size_t i = 0; i < n; ++i) x0[i] = rng.uniform(0.0, 10.0);

    Scenario sc{"lasso", CompositeProblem(LeastSquares(std::move(a), std::move(b)), Regularizer::l1(), delta),
                std::move(x0), std::move(s), default_specs(default_budget("lasso")), {}};
    return sc;
}

Scenario gen_nuclear(std::size_t rows, std::size_t cols, std::size_t mrows, std::size_t mcols, std::size_t rank,
                     double delta, std::uint64_t seed) {
    if (rows == 0 || cols == 0 || mrows == 0 || mcols == 0)
        throw std::invalid_argument("gen_nuclear: empty dimensions");
    if (rank == 0 || rank > std::min(rows, cols)) throw std::invalid_argument("gen_nuclear: rank out of range");
    if (!(delta >= 0.0)) throw std::invalid_argument("gen_nuclear: delta must be >= 0");

    Rng rng(seed);
    const std::size_t n = rows * cols;
    const std::size_t m = mrows * mcols;
    Matrix a = gaussian_matrix(m, n, rng);
    const Matrix left = gaussian_matrix(rows, rank, rng);
    const Matrix right = gaussian_matrix(rank, cols, rng);
    Vector s = flatten(multiply(left, right));

    Vector b = multiply(a, s);
    b += gaussian_vector(m, delta, rng);
    Vector x0 = gaussian_vector(n, 1.0, rng);

    Scenario sc{"nuclear",
                CompositeProblem(LeastSquares(std::move(a), std::move(b)), Regularizer::nuclear(rows, cols), delta,
                                 VariableShape{rows, cols}),
                std::move(x0), std::move(s), default_specs(default_budget("nuclear")), {}};
    return sc;
}

Scenario gen_group_pball(std::size_t groups, std::size_t group_size, double p, double delta, std::uint64_t seed,
                         std::size_t measurements) {
    if (groups == 0 || group_size == 0) throw std::invalid_argument("gen_group_pball: empty dimensions");
    if (!(p > 1.0)) throw std::invalid_argument("gen_group_pball: p must be > 1");
    if (!(delta > 0.0)) throw std::invalid_argument("gen_group_pball: delta must be > 0");
    const std::size_t n = groups * group_size;
    if (measurements == 0) measurements = n;
    if (measurements < n) throw std::invalid_argument("gen_group_pball: needs at least as many measurements as unknowns");

    Rng rng(seed);
    Matrix a = gaussian_matrix(measurements, n, rng);

    // Every group of s sits on its unit p-sphere. Rounding can leave a group a
    // hair inside; nudge outward so the sphere branch of the prox certifies it.
    Vector s = gaussian_vector(n, 1.0, rng);
    const std::span<double> sv = s.values();
    for (std::size_t g = 0; g < groups; ++g) {
        const std::span<double> part(sv.data() + g * group_size, group_size);
        const double nrm = norm_p(part, p);
        for (double& v : part) v /= nrm;
        while (norm_p(part, p) < 1.0)
            for (double& v : part) v *= 1.0 + std::numeric_limits<double>::epsilon();
    }

    // Noise-free data: s minimizes both terms, so it is the solution and the
    // gradient vanishes there. No group is qualified.
    Vector b = multiply(a, s);
    Vector x0 = gaussian_vector(n, 1.0, rng);

    Scenario sc{"group-pball",
                CompositeProblem(LeastSquares(std::move(a), std::move(b)),
                                 Regularizer::group_dist_pball(p, groups, group_size), delta),
                std::move(x0), std::move(s), default_specs(default_budget("group-pball")), {}};
    return sc;
}

namespace {

Scenario fixture(std::string name, Regularizer reg, Matrix a, Vector b, Vector x0) {
    return Scenario{std::move(name), CompositeProblem(LeastSquares(std::move(a), std::move(b)), std::move(reg), 1.0),
                    std::move(x0), std::nullopt, default_specs(default_budget("fixture-l1")), {}};
}

} // namespace

std::vector<Scenario> fixtures_2d() {
    // Constants found by a seeded random search over one-decimal entries and
    // frozen. The 2.6-ball data put the least-squares minimizer at (1, 0),
    // exactly on the sphere with zero gradient, so the qualifying condition fails.
    std::vector<Scenario> out;
    out.push_back(fixture("fixture-l1", Regularizer::l1(), Matrix::from_rows({{0.1, 1.8}, {1.2, 2.9}}),
                          Vector{-1.2, -2.0}, Vector{-2.8, -2.5}));
    out.push_back(fixture("fixture-ball13", Regularizer::dist_pball(1.3), Matrix::from_rows({{2.9, -1.0}, {-0.7, 0.5}}),
                          Vector{1.1, 0.2}, Vector{1.7, 3.0}));
    out.push_back(fixture("fixture-ball26", Regularizer::dist_pball(2.6), Matrix::from_rows({{0.4, -1.8}, {0.5, -0.9}}),
                          Vector{0.4, 0.5}, Vector{0.1, -0.3}));
    return out;
}

Scenario remark2_scenario(double x0) {
    return Scenario{"remark2",
                    CompositeProblem(LeastSquares(Matrix::identity(1), Vector{1.0}, 0.5), Regularizer::l1(), 1.0),
                    Vector{x0}, Vector{0.0}, default_specs(default_budget("remark2")), {}};
}

StructureSignature ground_truth_signature(const Scenario& s) {
    if (!s.ground_truth) throw std::invalid_argument("scenario '" + s.name + "' has no ground truth");
    return s.problem.regularizer().prox(*s.ground_truth, kGroundTruthThreshold).signature;
}

std::vector<std::string> scenario_names() {
    return {"lasso",      "lasso-strong", "nuclear-small",  "nuclear",        "group-pball",
            "fixture-l1", "fixture-ball13", "fixture-ball26", "remark2"};
}

std::size_t default_budget(const std::string& name) {
    if (name == "lasso") return 20000;
    if (name == "lasso-strong") return 5000;
    if (name == "nuclear-small") return 10000;
    if (name == "nuclear") return 10000;
    if (name == "group-pball") return 5000;
    if (name.rfind("fixture-", 0) == 0) return 500;
    if (name == "remark2") return 50;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

Scenario make_scenario(const std::string& name, std::uint64_t seed) {
    Scenario s = [&]() -> Scenario {
        if (name == "lasso") return gen_lasso(128, 60, 120, 0.01, seed);
        if (name == "lasso-strong") return gen_lasso(128, 192, 120, 0.01, seed);
        if (name == "nuclear-small") return gen_nuclear(6, 7, 2, 2, 3, 0.01, seed);
        if (name == "nuclear") return gen_nuclear(20, 20, 16, 16, 3, 0.01, seed);
        if (name == "group-pball") return gen_group_pball(10, 5, 1.3, 0.01, seed, 75);
        if (name == "remark2") return remark2_scenario(1.0);
        for (auto& f : fixtures_2d())
            if (f.name == name) return std::move(f);
        throw std::invalid_argument("unknown scenario '" + name + "'");
    }();
    s.name = name;
    s.algorithms = default_specs(default_budget(name));
    if (name == "nuclear") s.reference.budget = 30000;
    return s;
}

ReportBundle run_scenario(const Scenario& s) {
    if (s.algorithms.empty()) throw std::invalid_argument("scenario '" + s.name + "' has no algorithms");
    ReportBundle bundle;
    bundle.scenario = s.name;
    bundle.lipschitz = s.problem.lipschitz();
    bundle.gamma = resolve_gamma(s.problem, s.algorithms.front().config);
    bundle.collection_size = s.problem.candidate_collection().size();
    bundle.reference = compute_reference(s.problem, bundle.gamma, s.x0, s.reference);
    if (s.ground_truth) bundle.ground_truth_signature = ground_truth_signature(s);

    double floor = bundle.reference.f_star;
    for (const auto& spec : s.algorithms) {
        AlgorithmRun r;
        r.name = spec.name;
        r.trace = run(s.problem, spec.config, s.x0);
        r.series = identification_series(r.trace, bundle.reference.signature);
        r.stability = stability_metrics(r.series, bundle.reference.signature.size());
        if (bundle.ground_truth_signature)
            r.ground_truth_common = r.trace.final_signature.count_common(*bundle.ground_truth_signature);
        for (const auto& rec : r.trace.records) floor = std::min(floor, rec.f_value);
        bundle.runs.push_back(std::move(r));
    }
    bundle.f_star_floor = floor;
    return bundle;
}

} // namespace proxident
