#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace proxident {

/// Dense real vector. Also used as the flattened (row-major) storage of
/// matrix-valued iterates.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0);
    /// Throws std::invalid_argument on non-finite entries.
    explicit Vector(std::vector<double> data);
    Vector(std::initializer_list<double> values);

    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }
    const std::vector<double>& raw() const { return data_; }

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s);

    /// this += s * other
    void axpy(double s, const Vector& other);

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double squared_norm(const Vector& a);
double squared_distance(const Vector& a, const Vector& b);
/// p-norm for p >= 1.
double norm_p(std::span<const double> a, double p);

/// Dense row-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0);
    /// Throws std::invalid_argument on size mismatch or non-finite entries.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> values() const { return data_; }
    const std::vector<double>& raw() const { return data_; }

    Matrix transpose() const;
    double frobenius_norm() const;
    bool is_zero() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// a * x
Vector multiply(const Matrix& a, const Vector& x);
/// aᵀ * y
Vector multiply_transposed(const Matrix& a, const Vector& y);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Reinterprets a flattened row-major vector as a rows x cols matrix.
Matrix reshape(const Vector& v, std::size_t rows, std::size_t cols);
Vector flatten(const Matrix& m);

/// Largest singular value by power iteration on aᵀa, started from the
/// normalized all-ones vector. Returns 0 for the zero matrix; throws
/// std::runtime_error when the iteration cap is hit.
double spectral_norm(const Matrix& a, double tol);

struct SvdResult {
    Matrix left;      // rows x k, orthonormal columns
    Vector singulars; // k, nonincreasing
    Matrix right;     // cols x k, orthonormal columns
};

/// Thin SVD (k = min(rows, cols)) by one-sided Jacobi rotations.
SvdResult svd(const Matrix& a);

/// left * diag(singulars) * rightᵀ
Matrix reconstruct(const SvdResult& s);

/// Seeded deterministic random source. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; the distributions below are
/// implemented here so streams do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [lo, hi); requires lo < hi.
    double uniform(double lo, double hi);
    /// Standard normal via the Marsaglia polar method.
    double normal();
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace proxident
