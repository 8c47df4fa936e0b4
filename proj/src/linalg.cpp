#include "causalcast/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace causalcast {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw argument_error("from_rows: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Vector Matrix::row(std::size_t i) const {
    Vector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
}

Vector Matrix::col(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

Matrix Matrix::rows_slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows_) throw argument_error("rows_slice: bad range");
    Matrix m(end - begin, cols_);
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
    return m;
}

Matrix Matrix::cols_slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > cols_) throw argument_error("cols_slice: bad range");
    Matrix m(rows_, end - begin);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw argument_error("matmul: inner dimensions differ");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
        }
    }
    return out;
}

Vector Matrix::operator*(const Vector& v) const {
    if (cols_ != v.size()) throw argument_error("matvec: dimensions differ");
    Vector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (!same_shape(other)) throw argument_error("matrix add: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (!same_shape(other)) throw argument_error("matrix sub: shapes differ");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
}

Matrix Matrix::scaled(double s) const {
    Matrix out = *this;
    for (double& x : out.data_) x *= s;
    return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (!same_shape(other)) throw argument_error("matrix add: shapes differ");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw argument_error("dot: lengths differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Matrix outer(const Vector& a, const Vector& b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
    return m;
}

double quad_form(const Matrix& a, const Vector& x) {
    if (a.rows() != a.cols() || a.rows() != x.size())
        throw argument_error("quad_form: dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) row += a(i, j) * x[j];
        acc += x[i] * row;
    }
    return acc;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) throw argument_error("max_abs_diff: shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

Matrix symmetrized(const Matrix& a) {
    if (a.rows() != a.cols()) throw argument_error("symmetrized: matrix not square");
    Matrix s(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

CholeskyResult cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    CholeskyResult res;
    if (a.cols() != n) throw argument_error("cholesky: matrix not square");
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (!(diag > 0.0)) return res;  // also catches NaN
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / l(j, j);
        }
    }
    res.lower = std::move(l);
    res.ok = true;
    return res;
}

Vector forward_substitute(const Matrix& lower, const Vector& b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw argument_error("forward_substitute: dimensions differ");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * y[k];
        y[i] = v / lower(i, i);
    }
    return y;
}

Vector backward_substitute(const Matrix& lower, const Vector& b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw argument_error("backward_substitute: dimensions differ");
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) v -= lower(k, ii) * x[k];
        x[ii] = v / lower(ii, ii);
    }
    return x;
}

Vector chol_solve(const Matrix& lower, const Vector& b) {
    return backward_substitute(lower, forward_substitute(lower, b));
}

Matrix chol_solve(const Matrix& lower, const Matrix& b) {
    Matrix x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        Vector col = chol_solve(lower, b.col(j));
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
    }
    return x;
}

Matrix chol_inverse(const Matrix& lower) {
    return chol_solve(lower, Matrix::identity(lower.rows()));
}

double chol_log_det(const Matrix& lower) {
    double acc = 0.0;
    for (std::size_t i = 0; i < lower.rows(); ++i) acc += std::log(lower(i, i));
    return 2.0 * acc;
}

SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw argument_error("jacobi_eigen: matrix not square");
    Matrix d = symmetrized(a);
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += d(i, j) * d(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = d(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double dkp = d(k, p), dkq = d(k, q);
                    d(k, p) = c * dkp - s * dkq;
                    d(k, q) = s * dkp + c * dkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double dpk = d(p, k), dqk = d(q, k);
                    d(p, k) = c * dpk - s * dqk;
                    d(q, k) = s * dpk + c * dqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t i, std::size_t j) { return d(i, i) > d(j, j); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d(idx[j], idx[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, idx[j]);
    }
    return out;
}

Svd jacobi_svd(const Matrix& a, int max_sweeps) {
    // Hestenes one-sided Jacobi on columns of a working copy of A.
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) {
        Svd t = jacobi_svd(a.transpose(), max_sweeps);
        return Svd{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
    }
    Matrix u = a;
    Matrix v = Matrix::identity(n);
    const double eps = 1e-14;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double up = u(i, p), uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    Vector sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += u(i, j) * u(i, j);
        sv[j] = std::sqrt(norm);
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return sv[i] != sv[j] ? sv[i] > sv[j] : i < j;
    });
    Svd out;
    out.u = Matrix(m, n);
    out.v = Matrix(n, n);
    out.singular_values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = idx[j];
        out.singular_values[j] = sv[k];
        const double inv = sv[k] > 0.0 ? 1.0 / sv[k] : 0.0;
        for (std::size_t i = 0; i < m; ++i) out.u(i, j) = u(i, k) * inv;
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, k);
    }
    return out;
}

SpdMatrix::SpdMatrix(Matrix m, const std::string& name) {
    if (m.rows() != m.cols()) throw argument_error(name + ": not square");
    if (m.rows() == 0) throw argument_error(name + ": empty");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol)
                throw numeric_error(name + ": not symmetric within 1e-10");
    mat_ = symmetrized(m);
    CholeskyResult ch = cholesky(mat_);
    if (!ch.ok) {
        // Jitter only round-off-level indefiniteness; real failures stay
        // loud. A matrix with no scale at all (zero to within jitter) has
        // nothing to repair.
        SymmetricEigen eig = jacobi_eigen(mat_);
        const double min_eig = eig.values.back();
        if (min_eig > -kJitter && max_abs(mat_) > kJitter) {
            for (std::size_t i = 0; i < mat_.rows(); ++i) mat_(i, i) += kJitter;
            ch = cholesky(mat_);
        }
        if (!ch.ok)
            throw numeric_error(name + ": not positive definite (min eigenvalue " +
                                std::to_string(min_eig) + ")");
    }
    chol_ = std::move(ch.lower);
}

SpdMatrix SpdMatrix::scaled(const SpdMatrix& a, double s) {
    if (!(s > 0.0)) throw argument_error("SpdMatrix::scaled: factor must be positive");
    SpdMatrix out;
    out.mat_ = a.mat_.scaled(s);
    out.chol_ = a.chol_.scaled(std::sqrt(s));
    return out;
}

}  // namespace causalcast
