#include "proxident/solvers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace proxident {

std::string to_string(AccelerationTest test) {
    switch (test) {
    case AccelerationTest::None: return "pg";
    case AccelerationTest::AlwaysAccelerate: return "apg";
    case AccelerationTest::T1: return "t1";
    case AccelerationTest::T2: return "t2";
    case AccelerationTest::Monotone: return "mfista";
    }
    return "?";
}

ProxResult prox_grad_step(const CompositeProblem& p, double gamma, const Vector& x) {
    return p.prox_grad_step(gamma, x);
}

double resolve_gamma(const CompositeProblem& p, const SolverConfig& cfg) {
    const double inv_l = 1.0 / p.lipschitz();
    const double gamma = cfg.gamma.value_or(inv_l);
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("step size must be positive");
    const bool provisional = cfg.test == AccelerationTest::T1 || cfg.test == AccelerationTest::T2;
    if (provisional && gamma > inv_l) {
        throw std::invalid_argument("provisional acceleration requires gamma <= 1/L = " + std::to_string(inv_l) +
                                    ", got " + std::to_string(gamma));
    }
    if (gamma >= 2.0 * inv_l) {
        throw std::invalid_argument("step size must satisfy gamma < 2/L = " + std::to_string(2.0 * inv_l));
    }
    return gamma;
}

namespace {

bool z_membership(double step_sq, double f_step, double zeta, double f0) { return step_sq <= zeta && f_step <= f0; }

Vector extrapolate(const Vector& x, const Vector& x_prev, double alpha) {
    Vector y = x;
    if (alpha != 0.0) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * (x[i] - x_prev[i]);
    }
    return y;
}

const StructureSignature& restrict(const StructureSignature& sig, const std::optional<StructureSignature>& collection,
                                   StructureSignature& scratch) {
    if (!collection) return sig;
    scratch = sig.restricted_to(*collection);
    return scratch;
}

} // namespace

bool in_z(const CompositeProblem& p, double zeta, const Vector& y, const ProxResult& step, double f0) {
    return z_membership(squared_distance(step.point, y), p.value(step.point), zeta, f0);
}

bool test_t1(const StructureSignature& sig_prev, const StructureSignature& sig_cur, bool inside_z) {
    return !(inside_z && sig_cur.has_member_outside(sig_prev));
}

T2Outcome test_t2(const CompositeProblem& p, double gamma, const Vector& x_cur, const Vector& x_prev, double alpha,
                  bool inside_z, const std::optional<StructureSignature>& collection) {
    T2Outcome out{true, p.prox_grad_step(gamma, x_cur), p.prox_grad_step(gamma, extrapolate(x_cur, x_prev, alpha))};
    StructureSignature s1, s2;
    const auto& plain_sig = restrict(out.plain.signature, collection, s1);
    const auto& accel_sig = restrict(out.accel.signature, collection, s2);
    out.accelerate = !(inside_z && plain_sig.has_member_outside(accel_sig));
    return out;
}

Trace run(const CompositeProblem& p, const SolverConfig& cfg, const Vector& x0) {
    if (x0.size() != p.dimension()) throw std::invalid_argument("run: starting point has the wrong dimension");
    const double gamma = resolve_gamma(p, cfg);
    if (cfg.zeta && !(*cfg.zeta > 0.0)) throw std::invalid_argument("run: zeta must be positive");
    const std::size_t per_iteration = cfg.test == AccelerationTest::T2 ? 2 : 1;
    if (cfg.max_prox_steps < per_iteration) throw std::invalid_argument("run: prox-step budget too small");

    Trace trace;
    trace.gamma = gamma;
    trace.test = cfg.test;
    trace.f0 = p.value(x0);
    trace.zeta = cfg.zeta.value_or(std::numeric_limits<double>::quiet_NaN());
    if (cfg.keep_iterates) trace.iterates.push_back(x0);

    std::size_t evals = 0;
    auto step_at = [&](const Vector& y) {
        ++evals;
        return p.prox_grad_step(gamma, y);
    };

    InertiaSchedule schedule = cfg.schedule.restarted();
    Vector x = x0;      // x_k
    Vector x_prev = x0; // x_{k-1}
    Vector z = x0;      // T(y_{k-1}); differs from x_k only for MFISTA
    StructureSignature sig, sig_prev; // x_0 carries no certified structure
    double f_x = trace.f0;
    double last_step_sq = std::numeric_limits<double>::infinity();
    double f_last_step = std::numeric_limits<double>::infinity();
    StructureSignature scratch_a, scratch_b;

    for (std::size_t k = 0; evals + per_iteration <= cfg.max_prox_steps; ++k) {
        const double t_prev = schedule.t();
        double alpha = 0.0;
        bool inside_z = false;
        if (k > 0) {
            alpha = schedule.advance();
            inside_z = z_membership(last_step_sq, f_last_step, trace.zeta, trace.f0);
        }
        const double t_cur = schedule.t();

        Vector y;
        ProxResult result;
        bool accelerated = true;
        double alpha_used = alpha;

        switch (cfg.test) {
        case AccelerationTest::None:
            y = x;
            result = step_at(y);
            accelerated = false;
            alpha_used = 0.0;
            break;
        case AccelerationTest::AlwaysAccelerate:
            y = extrapolate(x, x_prev, alpha);
            result = step_at(y);
            break;
        case AccelerationTest::T1: {
            const auto& cur = restrict(sig, cfg.collection, scratch_a);
            const auto& prev = restrict(sig_prev, cfg.collection, scratch_b);
            accelerated = test_t1(prev, cur, inside_z);
            y = accelerated ? extrapolate(x, x_prev, alpha) : x;
            result = step_at(y);
            break;
        }
        case AccelerationTest::T2: {
            T2Outcome outcome = test_t2(p, gamma, x, x_prev, alpha, inside_z, cfg.collection);
            evals += 2;
            accelerated = outcome.accelerate;
            if (accelerated) {
                y = extrapolate(x, x_prev, alpha);
                result = std::move(outcome.accel);
            } else {
                y = x;
                result = std::move(outcome.plain);
            }
            break;
        }
        case AccelerationTest::Monotone: {
            // y_k = x_k + (t_{k-1}/t_k)(z_k - x_k) + ((t_{k-1} - 1)/t_k)(x_k - x_{k-1})
            y = extrapolate(x, x_prev, alpha);
            if (k > 0) {
                const double c = t_prev / t_cur;
                for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * (z[i] - x[i]);
            }
            result = step_at(y);
            break;
        }
        }
        if (!accelerated) alpha_used = 0.0;

        const double norm_step_sq = squared_distance(result.point, y);
        const double f_step = p.value(result.point);

        if (k == 0 && !cfg.zeta) trace.zeta = norm_step_sq; // y_0 = x_0 for every variant

        if (cfg.observer) cfg.observer(StepView{k, x_prev, x, y, result, t_prev, t_cur, f_x, f_step});

        last_step_sq = norm_step_sq;
        f_last_step = f_step;

        x_prev = x;
        sig_prev = sig;
        if (cfg.test == AccelerationTest::Monotone) {
            z = result.point;
            if (f_step <= f_x) {
                x = result.point;
                sig = std::move(result.signature);
                f_x = f_step;
            }
        } else {
            x = std::move(result.point);
            sig = std::move(result.signature);
            f_x = f_step;
        }

        trace.records.push_back(IterationRecord{k + 1, evals, f_x, sig, accelerated, inside_z, alpha_used,
                                                std::sqrt(norm_step_sq), t_cur});
        if (cfg.keep_iterates) trace.iterates.push_back(x);

        if (cfg.f_star_hint && cfg.stop_subopt > 0.0 && f_x - *cfg.f_star_hint <= cfg.stop_subopt) break;
    }

    trace.final_point = x;
    trace.final_signature = sig;
    trace.prox_evaluations = evals;
    return trace;
}

Trace run_pg(const CompositeProblem& p, SolverConfig cfg, const Vector& x0) {
    cfg.test = AccelerationTest::None;
    return run(p, cfg, x0);
}

Trace run_apg(const CompositeProblem& p, SolverConfig cfg, const Vector& x0) {
    cfg.test = AccelerationTest::AlwaysAccelerate;
    return run(p, cfg, x0);
}

Trace run_mfista(const CompositeProblem& p, SolverConfig cfg, const Vector& x0) {
    cfg.test = AccelerationTest::Monotone;
    return run(p, cfg, x0);
}

Trace run_provisional(const CompositeProblem& p, const SolverConfig& cfg, const Vector& x0) {
    if (cfg.test != AccelerationTest::T1 && cfg.test != AccelerationTest::T2) {
        throw std::invalid_argument("run_provisional: test must be T1 or T2");
    }
    return run(p, cfg, x0);
}

EqBaseReport check_eq_base(const Trace& trace, const Vector& x_star, double f_star, double gamma, double lipschitz,
                           double tol) {
    if (trace.iterates.size() != trace.records.size() + 1) {
        throw std::invalid_argument("check_eq_base: trace was recorded without iterates");
    }
    EqBaseReport report;
    report.worst_margin = -std::numeric_limits<double>::infinity();
    const double inv_2g = 1.0 / (2.0 * gamma);
    const double step_coeff = (1.0 - gamma * lipschitz) * inv_2g;

    double step_sum = 0.0;  // sum_{k<=n} t_k^2 ||x_{k+1} - y_k||^2
    double reset_sum = 0.0; // sum_{1<=k<=n} (1 - accel_k) ||x_k - x*||^2
    const double start = squared_distance(trace.iterates.front(), x_star) * inv_2g;
    for (std::size_t n = 0; n < trace.records.size(); ++n) {
        const IterationRecord& rec = trace.records[n]; // iteration n: y_n -> x_{n+1}
        step_sum += rec.t * rec.t * rec.norm_step * rec.norm_step;
        if (n >= 1 && !rec.accelerated) reset_sum += squared_distance(trace.iterates[n], x_star);
        const double lhs = rec.t * rec.t * (rec.f_value - f_star);
        const double rhs = -step_coeff * step_sum + start + inv_2g * reset_sum;
        const double margin = (lhs - rhs) / (1.0 + std::abs(rhs));
        report.worst_margin = std::max(report.worst_margin, margin);
        ++report.checked;
        if (lhs > rhs + tol * (1.0 + std::abs(rhs))) report.violations.push_back(n);
    }
    return report;
}

std::pair<Slack, Slack> descent_lemma_slacks(const CompositeProblem& p, double gamma, const Vector& x, const Vector& y) {
    const Vector tx = p.prox_grad_step(gamma, x).point;
    const double gl = gamma * p.lipschitz();
    const double f_tx = p.value(tx);
    const double f_y = p.value(y);
    const double d_tx_x = squared_distance(tx, x);
    const double d_tx_y = squared_distance(tx, y);
    const double d_x_y = squared_distance(x, y);

    const double lhs1 = f_tx + (1.0 - gl) / (2.0 * gamma) * d_tx_x + d_tx_y / (2.0 * gamma);
    const double rhs1 = f_y + d_x_y / (2.0 * gamma);

    double inner = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) inner += (x[i] - y[i]) * (tx[i] - x[i]);
    const double lhs2 = f_tx + (2.0 - gl) / (2.0 * gamma) * d_tx_x + inner / gamma;
    const double rhs2 = f_y;

    const double scale1 = std::abs(f_tx) + std::abs(f_y) + (d_tx_x + d_tx_y + d_x_y) / (2.0 * gamma);
    const double scale2 = std::abs(f_tx) + std::abs(f_y) + d_tx_x / gamma + std::abs(inner) / gamma;
    return {Slack{rhs1 - lhs1, scale1}, Slack{rhs2 - lhs2, scale2}};
}

Slack accelerated_descent_slack(const CompositeProblem& p, double gamma, const StepView& view, const Vector& x_star,
                                double f_star) {
    const double gl = gamma * p.lipschitz();
    const double tk = view.t;
    const double tk1 = view.t_prev;
    const Vector& xn = view.step.point; // x_{k+1}
    const Vector& xk = view.x;
    const Vector& yk = view.y;

    const double v_k = view.f_step - f_star;
    const double v_km1 = view.f_x - f_star;
    const double lhs = tk * tk * v_k - tk1 * tk1 * v_km1;

    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 0; i < xn.size(); ++i) {
        const double da = tk * xn[i] - tk * yk[i];
        const double db = tk * xn[i] - (tk - 1.0) * xk[i] - x_star[i];
        const double dc = tk * yk[i] - (tk - 1.0) * xk[i] - x_star[i];
        a += da * da;
        b += db * db;
        c += dc * dc;
    }
    const double inv_2g = 1.0 / (2.0 * gamma);
    const double rhs = -(1.0 - gl) * inv_2g * a - inv_2g * b + inv_2g * c;
    const double scale = tk * tk * std::abs(v_k) + tk1 * tk1 * std::abs(v_km1) + inv_2g * (std::abs(1.0 - gl) * a + b + c);
    return Slack{rhs - lhs, scale};
}

} // namespace proxident
