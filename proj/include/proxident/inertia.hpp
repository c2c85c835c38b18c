#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace proxident {

enum class InertiaKind { Nesterov, ChambolleDossal, Liang, None };

/// Inertial sequence (t_k) with alpha_{k+1} = (t_k - 1) / t_{k+1}.
///
/// Every variant starts at t = 1, so the first coefficient handed out by
/// advance() is 0. Variants:
///   Nesterov          t' = (1 + sqrt(1 + 4 t^2)) / 2
///   ChambolleDossal   t_k = (k + a - 1) / a, a > 2
///   Liang             t' = (p + sqrt(q + 4 t^2)) / 2, p in (0, 1], q > 0
///   None              t = 1 forever (alpha = 0, for degenerate comparisons)
class InertiaSchedule {
public:
    static InertiaSchedule nesterov();
    static InertiaSchedule chambolle_dossal(double a);
    static InertiaSchedule liang(double p, double q);
    static InertiaSchedule none();

    InertiaKind kind() const { return kind_; }
    double t() const { return t_; }
    /// Number of advance() calls so far; t() is t_{k} with k = index() + 1.
    std::size_t index() const { return k_; }

    /// Moves to the next t and returns (t_old - 1) / t_new.
    double advance();

    /// Same variant and parameters, back at t = 1.
    InertiaSchedule restarted() const { return InertiaSchedule(kind_, a_, p_, q_); }

    std::string describe() const;

private:
    InertiaSchedule(InertiaKind kind, double a, double p, double q) : kind_(kind), a_(a), p_(p), q_(q) {}
    double next_t() const;

    InertiaKind kind_;
    double a_ = 0.0;
    double p_ = 0.0;
    double q_ = 0.0;
    double t_ = 1.0;
    std::size_t k_ = 0;
};

struct Assumption2Report {
    bool recurrence_ok = true;      // t_{k+1}^2 - t_{k+1} <= t_k^2 for all k checked
    double min_recurrence_slack = 0.0;  // relative to max(1, t_k^2); a violation is < -1e-12
    std::vector<std::size_t> violations; // k where the recurrence fails
    double growth_constant = 0.0;   // min_k t_k / k
    bool growth_ok = false;

    bool passed() const { return recurrence_ok && growth_ok; }
};

/// Checks the inertial-sequence assumptions over `horizon` terms of a
/// restarted copy of `schedule`.
Assumption2Report validate_assumption2(const InertiaSchedule& schedule, std::size_t horizon);

/// Same checks on an explicit sequence t_1, t_2, ... (index 0 holds t_1).
Assumption2Report validate_assumption2(const std::vector<double>& t);

} // namespace proxident
