#include "proxident/smooth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace proxident {

LeastSquares::LeastSquares(Matrix a, Vector b, double scale) : a_(std::move(a)), b_(std::move(b)), scale_(scale) {
    if (a_.rows() != b_.size()) {
        throw std::invalid_argument("LeastSquares: A has " + std::to_string(a_.rows()) + " rows but b has " +
                                    std::to_string(b_.size()) + " entries");
    }
    if (a_.cols() == 0) throw std::invalid_argument("LeastSquares: empty operator");
    if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw std::invalid_argument("LeastSquares: scale must be > 0");
}

Vector LeastSquares::residual(const Vector& x) const {
    if (x.size() != a_.cols()) {
        throw std::invalid_argument("LeastSquares: point has dimension " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(a_.cols()));
    }
    Vector r = multiply(a_, x);
    r -= b_;
    return r;
}

double LeastSquares::value(const Vector& x) const { return scale_ * squared_norm(residual(x)); }

Vector LeastSquares::gradient(const Vector& x) const {
    Vector g = multiply_transposed(a_, residual(x));
    g *= 2.0 * scale_;
    return g;
}

double LeastSquares::value_and_gradient(const Vector& x, Vector& grad) const {
    const Vector r = residual(x);
    grad = multiply_transposed(a_, r);
    grad *= 2.0 * scale_;
    return scale_ * squared_norm(r);
}

double LeastSquares::lipschitz_constant() const {
    const double s = spectral_norm(a_, 1e-8);
    return 2.0 * scale_ * s * s;
}

CompositeProblem::CompositeProblem(LeastSquares smooth, Regularizer reg, double lambda, VariableShape shape)
    : smooth_(std::move(smooth)), reg_(std::move(reg)), lambda_(lambda), shape_(shape) {
    if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw std::invalid_argument("CompositeProblem: lambda must be >= 0");
    if (shape_.size() != smooth_.dimension()) {
        throw std::invalid_argument("CompositeProblem: variable shape does not match the operator's column count");
    }
    if (const auto d = reg_.dimension(); d && *d != shape_.size()) {
        throw std::invalid_argument("CompositeProblem: regularizer dimension does not match the variable");
    }
    if (const auto* n = std::get_if<NuclearNorm>(&reg_.variant()); n && (n->rows != shape_.rows || n->cols != shape_.cols)) {
        throw std::invalid_argument("CompositeProblem: nuclear-norm shape does not match the variable shape");
    }
    lipschitz_ = smooth_.lipschitz_constant();
    if (!(lipschitz_ > 0.0)) throw std::invalid_argument("CompositeProblem: zero operator has no useful step size");
}

namespace {

VariableShape natural_shape(const LeastSquares& smooth, const Regularizer& reg) {
    if (const auto* n = std::get_if<NuclearNorm>(&reg.variant())) return VariableShape{n->rows, n->cols};
    return VariableShape{smooth.dimension(), 1};
}

} // namespace

CompositeProblem::CompositeProblem(LeastSquares smooth, Regularizer reg, double lambda)
    : CompositeProblem(smooth, reg, lambda, natural_shape(smooth, reg)) {}

double CompositeProblem::value(const Vector& x) const {
    const double f = smooth_.value(x);
    return lambda_ == 0.0 ? f : f + lambda_ * reg_.evaluate(x);
}

ProxResult CompositeProblem::prox_grad_step(double gamma, const Vector& x) const {
    if (!(gamma > 0.0)) throw std::invalid_argument("prox_grad_step: gamma must be positive");
    Vector u = x;
    u.axpy(-gamma, smooth_.gradient(x));
    if (lambda_ == 0.0) return ProxResult{std::move(u), {}};
    return reg_.prox(u, gamma * lambda_);
}

} // namespace proxident
