#include "proxident/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace proxident {

InertiaSchedule InertiaSchedule::nesterov() { return InertiaSchedule(InertiaKind::Nesterov, 0, 0, 0); }

InertiaSchedule InertiaSchedule::chambolle_dossal(double a) {
    if (!(a > 2.0) || !std::isfinite(a)) throw std::invalid_argument("Chambolle-Dossal schedule requires a > 2");
    return InertiaSchedule(InertiaKind::ChambolleDossal, a, 0, 0);
}

InertiaSchedule InertiaSchedule::liang(double p, double q) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("Liang schedule requires p in (0, 1]");
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("Liang schedule requires q > 0");
    return InertiaSchedule(InertiaKind::Liang, 0, p, q);
}

InertiaSchedule InertiaSchedule::none() { return InertiaSchedule(InertiaKind::None, 0, 0, 0); }

double InertiaSchedule::next_t() const {
    switch (kind_) {
    case InertiaKind::Nesterov: return (1.0 + std::sqrt(1.0 + 4.0 * t_ * t_)) / 2.0;
    case InertiaKind::ChambolleDossal: {
        // t_k = (k + a - 1) / a with t_1 = 1; the next index is k_ + 2.
        const double k = static_cast<double>(k_ + 2);
        return (k + a_ - 1.0) / a_;
    }
    case InertiaKind::Liang: return (p_ + std::sqrt(q_ + 4.0 * t_ * t_)) / 2.0;
    case InertiaKind::None: return 1.0;
    }
    return 1.0;
}

double InertiaSchedule::advance() {
    const double t_old = t_;
    t_ = next_t();
    ++k_;
    return (t_old - 1.0) / t_;
}

std::string InertiaSchedule::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case InertiaKind::Nesterov: os << "nesterov"; break;
    case InertiaKind::ChambolleDossal: os << "cd:" << a_; break;
    case InertiaKind::Liang: os << "liang:" << p_ << "," << q_; break;
    case InertiaKind::None: os << "none"; break;
    }
    return os.str();
}

Assumption2Report validate_assumption2(const std::vector<double>& t) {
    if (t.size() < 2) throw std::invalid_argument("validate_assumption2: need at least two terms");
    Assumption2Report report;
    report.min_recurrence_slack = std::numeric_limits<double>::infinity();
    report.growth_constant = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
        report.growth_constant = std::min(report.growth_constant, t[i] / static_cast<double>(i + 1));
        if (i + 1 < t.size()) {
            // Relative to t_k^2: Nesterov meets the recurrence with equality and
            // its rounding error grows with t_k^2.
            const double slack = (t[i] * t[i] - (t[i + 1] * t[i + 1] - t[i + 1])) / std::max(1.0, t[i] * t[i]);
            report.min_recurrence_slack = std::min(report.min_recurrence_slack, slack);
            if (slack < -1e-12) {
                report.recurrence_ok = false;
                report.violations.push_back(i + 1);
            }
        }
    }
    report.growth_ok = report.growth_constant > 0.0;
    return report;
}

Assumption2Report validate_assumption2(const InertiaSchedule& schedule, std::size_t horizon) {
    if (horizon < 2) throw std::invalid_argument("validate_assumption2: horizon must be >= 2");
    InertiaSchedule fresh = schedule.restarted();
    std::vector<double> t;
    t.reserve(horizon);
    t.push_back(fresh.t());
    while (t.size() < horizon) {
        fresh.advance();
        t.push_back(fresh.t());
    }
    return validate_assumption2(t);
}

} // namespace proxident
