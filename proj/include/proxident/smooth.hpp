#pragma once

#include "proxident/linalg.hpp"
#include "proxident/regularizers.hpp"

#include <cstddef>

namespace proxident {

/// f(x) = scale * ||A x - b||^2, with x flattened row-major when it is a matrix.
class LeastSquares {
public:
    /// Throws std::invalid_argument on inconsistent sizes or scale <= 0.
    LeastSquares(Matrix a, Vector b, double scale = 1.0);

    const Matrix& a() const { return a_; }
    const Vector& b() const { return b_; }
    double scale() const { return scale_; }
    std::size_t dimension() const { return a_.cols(); }

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;
    /// Value and gradient sharing the residual.
    double value_and_gradient(const Vector& x, Vector& grad) const;
    /// 2 * scale * sigma_max(A)^2
    double lipschitz_constant() const;

private:
    Vector residual(const Vector& x) const;

    Matrix a_;
    Vector b_;
    double scale_;
};

/// Shape of the optimization variable; a vector is rows x 1.
struct VariableShape {
    std::size_t rows;
    std::size_t cols = 1;
    std::size_t size() const { return rows * cols; }
    bool operator==(const VariableShape&) const = default;
};

/// F = f + lambda * g
class CompositeProblem {
public:
    /// Throws std::invalid_argument when the pieces disagree on dimension.
    CompositeProblem(LeastSquares smooth, Regularizer reg, double lambda, VariableShape shape);
    CompositeProblem(LeastSquares smooth, Regularizer reg, double lambda);

    const LeastSquares& smooth() const { return smooth_; }
    const Regularizer& regularizer() const { return reg_; }
    double lambda() const { return lambda_; }
    const VariableShape& shape() const { return shape_; }
    std::size_t dimension() const { return shape_.size(); }

    double value(const Vector& x) const;
    /// Lipschitz constant of the smooth part, computed once at construction.
    double lipschitz() const { return lipschitz_; }

    /// T_gamma(x) = prox_{gamma lambda g}(x - gamma grad f(x)). With lambda = 0
    /// this is a plain gradient step with an empty signature.
    ProxResult prox_grad_step(double gamma, const Vector& x) const;

    std::vector<ManifoldId> candidate_collection() const { return reg_.candidate_collection(dimension()); }

private:
    LeastSquares smooth_;
    Regularizer reg_;
    double lambda_;
    VariableShape shape_;
    double lipschitz_;
};

} // namespace proxident
