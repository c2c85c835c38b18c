#include "proxident/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace proxident {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_same_size(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector size mismatch: " + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()));
    }
}

} // namespace

Vector::Vector(std::size_t n, double value) : data_(n, value) {
    require_finite(std::span<const double>(&value, 1), "Vector");
}

Vector::Vector(std::vector<double> data) : data_(std::move(data)) {
    require_finite(data_, "Vector");
}

Vector::Vector(std::initializer_list<double> values) : data_(values) {
    require_finite(data_, "Vector");
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_size(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_size(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

void Vector::axpy(double s, const Vector& other) {
    require_same_size(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
    require_same_size(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_norm(const Vector& a) { return dot(a, a); }

double norm2(const Vector& a) { return std::sqrt(squared_norm(a)); }

double squared_distance(const Vector& a, const Vector& b) {
    require_same_size(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double norm_p(std::span<const double> a, double p) {
    if (p < 1.0) throw std::invalid_argument("norm_p: p must be >= 1");
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    // Scaled accumulation avoids overflow of |v|^p for large p.
    double acc = 0.0;
    for (double v : a) acc += std::pow(std::abs(v) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), data_(rows * cols, value) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }
    require_finite(data_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

Vector multiply(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) {
        throw std::invalid_argument("multiply: matrix has " + std::to_string(a.cols()) +
                                    " columns, vector has " + std::to_string(x.size()));
    }
    Vector out(a.rows());
    const double* row = a.raw().data();
    for (std::size_t i = 0; i < a.rows(); ++i, row += a.cols()) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        out[i] = acc;
    }
    return out;
}

Vector multiply_transposed(const Matrix& a, const Vector& y) {
    if (a.rows() != y.size()) {
        throw std::invalid_argument("multiply_transposed: matrix has " + std::to_string(a.rows()) +
                                    " rows, vector has " + std::to_string(y.size()));
    }
    Vector out(a.cols());
    const double* row = a.raw().data();
    for (std::size_t i = 0; i < a.rows(); ++i, row += a.cols()) {
        const double yi = y[i];
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += row[j] * yi;
    }
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix difference: shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

Matrix reshape(const Vector& v, std::size_t rows, std::size_t cols) {
    if (rows * cols != v.size()) throw std::invalid_argument("reshape: size mismatch");
    return Matrix(rows, cols, v.raw());
}

Vector flatten(const Matrix& m) { return Vector(m.raw()); }

double spectral_norm(const Matrix& a, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("spectral_norm: tol must be positive");
    if (a.is_zero()) return 0.0;

    const std::size_t n = a.cols();
    constexpr int kMaxIterations = 200000;

    // The all-ones start can be orthogonal to the whole row space; fall back
    // to the canonical basis vectors in order.
    for (std::size_t attempt = 0; attempt <= n; ++attempt) {
        Vector v(n, attempt == 0 ? 1.0 : 0.0);
        if (attempt > 0) v[attempt - 1] = 1.0;
        v *= 1.0 / norm2(v);

        double estimate = 0.0;
        bool collapsed = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            Vector w = multiply_transposed(a, multiply(a, v));
            const double rayleigh = dot(v, w);
            const double wn = norm2(w);
            if (wn == 0.0) {
                collapsed = true;
                break;
            }
            v = (1.0 / wn) * std::move(w);
            // The Rayleigh quotient of aᵀa increases monotonically along the
            // iteration; stop once the relative gain is negligible.
            if (it > 0 && rayleigh - estimate <= tol * tol * rayleigh) {
                return std::sqrt(std::max(rayleigh, estimate));
            }
            estimate = std::max(estimate, rayleigh);
        }
        if (!collapsed) {
            throw std::runtime_error("spectral_norm: power iteration did not converge "
                                     "(clustered leading singular values)");
        }
    }
    throw std::runtime_error("spectral_norm: no start vector produced a nonzero iterate");
}

namespace {

SvdResult svd_tall(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    // Column-major working copies so rotations touch contiguous memory.
    std::vector<std::vector<double>> w(n, std::vector<double>(m));
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
        v[j][j] = 1.0;
    }

    constexpr double kEps = 1e-15;
    constexpr int kMaxSweeps = 80;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w[p][i] * w[p][i];
                    beta += w[q][i] * w[q][i];
                    gamma += w[p][i] * w[q][i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w[p][i], wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v[p][i], vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (double x : w[j]) acc += x * x;
        sigma[j] = std::sqrt(acc);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    const double sigma_max = n == 0 ? 0.0 : sigma[order[0]];
    const double negligible = sigma_max * 1e-13;

    SvdResult out{Matrix(m, n), Vector(n), Matrix(n, n)};
    std::vector<std::vector<double>> basis; // accepted left columns
    basis.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        std::vector<double> u(m, 0.0);
        if (sigma[j] > negligible && sigma[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u[i] = w[j][i] / sigma[j];
            out.singulars[k] = sigma[j];
        } else {
            // Complete the left basis: Gram-Schmidt over canonical vectors.
            out.singulars[k] = sigma[j];
            for (std::size_t e = 0; e < m; ++e) {
                std::fill(u.begin(), u.end(), 0.0);
                u[(e + k) % m] = 1.0;
                for (int pass = 0; pass < 2; ++pass) {
                    for (const auto& b : basis) {
                        double proj = 0.0;
                        for (std::size_t i = 0; i < m; ++i) proj += b[i] * u[i];
                        for (std::size_t i = 0; i < m; ++i) u[i] -= proj * b[i];
                    }
                }
                double nrm = 0.0;
                for (double x : u) nrm += x * x;
                nrm = std::sqrt(nrm);
                if (nrm > 1e-6) {
                    for (double& x : u) x /= nrm;
                    break;
                }
            }
        }
        for (std::size_t i = 0; i < m; ++i) out.left(i, k) = u[i];
        for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v[j][i];
        basis.push_back(std::move(u));
    }
    return out;
}

} // namespace

SvdResult svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (a.rows() >= a.cols()) return svd_tall(a);
    SvdResult t = svd_tall(a.transpose());
    return SvdResult{std::move(t.right), std::move(t.singulars), std::move(t.left)};
}

Matrix reconstruct(const SvdResult& s) {
    const std::size_t m = s.left.rows();
    const std::size_t n = s.right.rows();
    const std::size_t k = s.singulars.size();
    Matrix out(m, n);
    for (std::size_t r = 0; r < k; ++r) {
        const double sr = s.singulars[r];
        if (sr == 0.0) continue;
        for (std::size_t i = 0; i < m; ++i) {
            const double li = s.left(i, r) * sr;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += li * s.right(j, r);
        }
    }
    return out;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Rng::uniform: requires lo < hi");
    const double x = lo + (hi - lo) * uniform();
    // Rounding can land exactly on hi for wide ranges.
    return x < hi ? x : std::nextafter(hi, lo);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return std::min(i, n - 1);
}

} // namespace proxident
