#include "proxident/identification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxident {

ReferenceSolution compute_reference(const CompositeProblem& p, double gamma, const Vector& x0,
                                    const ReferenceOptions& options) {
    if (!(options.target_subopt > 0.0)) throw std::invalid_argument("compute_reference: target_subopt must be > 0");
    if (options.budget == 0) throw std::invalid_argument("compute_reference: empty budget");

    // MFISTA in restarted chunks; a chunk that fails to lower the best value
    // by more than target_subopt (relative) marks the plateau.
    constexpr std::size_t kChunk = 5000;
    SolverConfig cfg;
    cfg.gamma = gamma;
    cfg.test = AccelerationTest::Monotone;

    ReferenceSolution ref;
    Vector best = x0;
    double best_f = p.value(x0);
    double last_decrease = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    while (used < options.budget) {
        cfg.max_prox_steps = std::min(kChunk, options.budget - used);
        const Trace t = run(p, cfg, best);
        used += t.prox_evaluations;
        const double f = t.records.back().f_value;
        last_decrease = (best_f - f) / std::max(1.0, std::abs(f));
        if (f < best_f) {
            best_f = f;
            best = t.final_point;
        }
        if (last_decrease <= options.target_subopt) break;
    }

    // Plain steps keep F monotone and give a prox-certified final signature.
    ProxResult last = p.prox_grad_step(gamma, best);
    ++used;
    double last_f = p.value(last.point);
    for (std::size_t i = 1; i < options.polish_steps; ++i) {
        ProxResult next = p.prox_grad_step(gamma, last.point);
        ++used;
        const double f = p.value(next.point);
        const bool settled = next.point == last.point;
        last = std::move(next);
        last_f = f;
        if (settled) break;
    }

    ref.point = std::move(last.point);
    ref.signature = std::move(last.signature);
    ref.f_star = std::min(best_f, last_f);
    ref.subopt_achieved = std::max(0.0, last_decrease);
    ref.converged = ref.subopt_achieved <= options.target_subopt;
    ref.prox_steps = used;
    return ref;
}

std::vector<IdentificationPoint> identification_series(const Trace& trace, const StructureSignature& target) {
    std::vector<IdentificationPoint> out;
    out.reserve(trace.records.size());
    for (const auto& rec : trace.records) {
        const std::size_t common = rec.signature.count_common(target);
        out.push_back({rec.k, rec.prox_steps, common, rec.signature.size() - common});
    }
    return out;
}

StabilityMetrics stability_metrics(const std::vector<IdentificationPoint>& series, std::size_t target_size) {
    if (series.empty()) throw std::invalid_argument("stability_metrics: empty series");
    StabilityMetrics m;
    for (const auto& pt : series) {
        const bool full = pt.correct == target_size && pt.spurious == 0;
        if (!m.first_full_identification) {
            if (full) m.first_full_identification = pt.prox_steps;
        } else if (!full) {
            ++m.holes_after_first;
        }
    }
    return m;
}

} // namespace proxident
