#pragma once

#include "proxident/regularizers.hpp"
#include "proxident/smooth.hpp"
#include "proxident/solvers.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace proxident {

struct ReferenceSolution {
    Vector point;
    double f_star = 0.0;
    /// Signature of the prox call that produced `point`.
    StructureSignature signature;
    /// Relative decrease of F over the final stretch of the run.
    double subopt_achieved = 0.0;
    bool converged = false;
    std::size_t prox_steps = 0;
};

struct ReferenceOptions {
    double target_subopt = 1e-13;
    std::size_t budget = 200000;
    /// Prox-gradient steps run from the best MFISTA point; the last one
    /// supplies point and signature.
    std::size_t polish_steps = 2000;
};

/// High-accuracy solution by MFISTA followed by plain prox-gradient polishing.
ReferenceSolution compute_reference(const CompositeProblem& p, double gamma, const Vector& x0,
                                    const ReferenceOptions& options = {});

struct IdentificationPoint {
    std::size_t k;
    std::size_t prox_steps;
    std::size_t correct;  // |sig_k ∩ sig*|
    std::size_t spurious; // |sig_k \ sig*|
};

std::vector<IdentificationPoint> identification_series(const Trace& trace, const StructureSignature& target);

struct StabilityMetrics {
    /// Prox-step count of the first record with the full target structure and
    /// nothing spurious; empty when that never happens.
    std::optional<std::size_t> first_full_identification;
    /// Records after the first full identification that do not have it.
    std::size_t holes_after_first = 0;
};

/// Throws std::invalid_argument on an empty series.
StabilityMetrics stability_metrics(const std::vector<IdentificationPoint>& series, std::size_t target_size);

} // namespace proxident
