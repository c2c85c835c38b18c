#pragma once

#include "proxident/inertia.hpp"
#include "proxident/linalg.hpp"
#include "proxident/regularizers.hpp"
#include "proxident/smooth.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace proxident {

/// How the extrapolation decision is made at each iteration.
///   None              proximal gradient, never extrapolates
///   AlwaysAccelerate  accelerated proximal gradient (FISTA)
///   T1                reset inertia when a new candidate manifold is reached
///   T2                one-step-ahead comparison of plain and extrapolated steps
///   Monotone          monotone FISTA (MFISTA)
enum class AccelerationTest { None, AlwaysAccelerate, T1, T2, Monotone };

std::string to_string(AccelerationTest test);

/// Values visible to an observer after each prox-gradient step. Iteration k
/// turns y_k into step = T_gamma(y_k); `x` is x_k.
struct StepView {
    std::size_t k;
    const Vector& x_prev; // x_{k-1} (x_0 when k == 0)
    const Vector& x;      // x_k
    const Vector& y;      // y_k
    const ProxResult& step;
    double t_prev; // t_{k-1}, 1 when k == 0
    double t;      // t_k
    double f_x;    // F(x_k)
    double f_step; // F(step.point)
};

using StepObserver = std::function<void(const StepView&)>;

struct SolverConfig {
    /// Step size; 1/L when unset.
    std::optional<double> gamma;
    InertiaSchedule schedule = InertiaSchedule::nesterov();
    AccelerationTest test = AccelerationTest::None;
    /// Z-set radius; ||T_gamma(x_0) - x_0||^2 when unset.
    std::optional<double> zeta;
    std::size_t max_prox_steps = 1000;
    /// Early stop once F(x_k) - f_star_hint <= stop_subopt (needs both set).
    std::optional<double> f_star_hint;
    double stop_subopt = 0.0;
    std::uint64_t seed = 0;
    /// Candidate manifolds the T1/T2 tests look at; the full collection of the
    /// regularizer when unset.
    std::optional<StructureSignature> collection;
    /// Keep x_0, x_1, ... in the trace (needed by check_eq_base).
    bool keep_iterates = false;
    StepObserver observer;
};

struct IterationRecord {
    std::size_t k;           // index of the iterate x_k this record describes (k >= 1)
    std::size_t prox_steps;  // cumulative prox-gradient evaluations
    double f_value;          // F(x_k)
    StructureSignature signature;
    bool accelerated;        // y_{k-1} was extrapolated
    bool in_z;               // Z-membership of y_{k-2} used by the test for y_{k-1}
    double alpha;            // extrapolation coefficient applied to y_{k-1}
    double norm_step;        // ||T_gamma(y_{k-1}) - y_{k-1}||
    double t;                // t_{k-1}
};

struct Trace {
    std::vector<IterationRecord> records;
    Vector final_point;
    StructureSignature final_signature;
    /// x_0, x_1, ... when SolverConfig::keep_iterates is set.
    std::vector<Vector> iterates;
    std::size_t prox_evaluations = 0;
    double gamma = 0.0;
    double zeta = 0.0;
    double f0 = 0.0;
    AccelerationTest test = AccelerationTest::None;
};

/// T_gamma(x) with the signature of the prox branch.
ProxResult prox_grad_step(const CompositeProblem& p, double gamma, const Vector& x);

/// Step size the config resolves to, after validation against 1/L and 2/L.
/// Throws std::invalid_argument on an invalid configuration.
double resolve_gamma(const CompositeProblem& p, const SolverConfig& cfg);

Trace run(const CompositeProblem& p, const SolverConfig& cfg, const Vector& x0);

Trace run_pg(const CompositeProblem& p, SolverConfig cfg, const Vector& x0);
Trace run_apg(const CompositeProblem& p, SolverConfig cfg, const Vector& x0);
Trace run_mfista(const CompositeProblem& p, SolverConfig cfg, const Vector& x0);
/// cfg.test must be T1 or T2.
Trace run_provisional(const CompositeProblem& p, const SolverConfig& cfg, const Vector& x0);

/// y belongs to Z when ||T_gamma(y) - y||^2 <= zeta and F(T_gamma(y)) <= f0.
bool in_z(const CompositeProblem& p, double zeta, const Vector& y, const ProxResult& step, double f0);

/// Test T1: accelerate unless, inside Z, x_k reached a manifold x_{k-1} was not on.
bool test_t1(const StructureSignature& sig_prev, const StructureSignature& sig_cur, bool inside_z);

struct T2Outcome {
    bool accelerate;
    ProxResult plain; // T_gamma(x_k)
    ProxResult accel; // T_gamma(x_k + alpha (x_k - x_{k-1}))
};

/// Test T2: accelerate unless, inside Z, the plain step lies on a manifold the
/// extrapolated step misses. Both candidates are returned for reuse.
T2Outcome test_t2(const CompositeProblem& p, double gamma, const Vector& x_cur, const Vector& x_prev, double alpha,
                  bool inside_z, const std::optional<StructureSignature>& collection = std::nullopt);

struct EqBaseReport {
    std::size_t checked = 0;
    std::vector<std::size_t> violations; // iteration indices n
    double worst_margin = 0.0;           // max over n of (LHS - RHS) / (1 + |RHS|)
    bool passed() const { return violations.empty(); }
};

/// Evaluates both sides of the provisional suboptimality bound
///   t_n^2 (F(x_{n+1}) - F*) <= -sum_{k<=n} (1 - gamma L)/(2 gamma) t_k^2 ||x_{k+1} - y_k||^2
///                             + ||x_0 - x*||^2 / (2 gamma)
///                             + sum_{1<=k<=n} (1 - accel_k) ||x_k - x*||^2 / (2 gamma)
/// at every n of a trace recorded with keep_iterates. A violation is
/// LHS > RHS + tol (1 + |RHS|).
EqBaseReport check_eq_base(const Trace& trace, const Vector& x_star, double f_star, double gamma, double lipschitz,
                           double tol = 1e-8);

/// Slack (rhs - lhs) of an inequality together with the magnitude of the
/// terms involved, for relative comparisons.
struct Slack {
    double value;
    double scale;
    bool holds(double rel_tol) const { return value >= -rel_tol * (1.0 + scale); }
};

/// The two descent-lemma inequalities for T_gamma at (x, y).
std::pair<Slack, Slack> descent_lemma_slacks(const CompositeProblem& p, double gamma, const Vector& x, const Vector& y);

/// Accelerated descent inequality for one step x_{k+1} = T_gamma(y_k), with
/// v_k = F(x_{k+1}) - f_star and v_{k-1} = F(x_k) - f_star.
Slack accelerated_descent_slack(const CompositeProblem& p, double gamma, const StepView& view, const Vector& x_star,
                                double f_star);

} // namespace proxident
