#ifndef CAUSALCAST_LINALG_HPP
#define CAUSALCAST_LINALG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "causalcast/common.hpp"

namespace causalcast {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Everything in this engine is small
// (q <= a few dozen series, p <= a dozen predictors), so the implementation
// favors clarity over blocking.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Vector row(std::size_t i) const;
    Vector col(std::size_t j) const;
    Matrix rows_slice(std::size_t begin, std::size_t end) const;  // [begin, end)
    Matrix cols_slice(std::size_t begin, std::size_t end) const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& other) const;
    Vector operator*(const Vector& v) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix scaled(double s) const;
    Matrix& operator+=(const Matrix& other);

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
Matrix outer(const Vector& a, const Vector& b);
// x' A x for square A.
double quad_form(const Matrix& a, const Vector& x);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix symmetrized(const Matrix& a);

// Plain Cholesky, no pivoting. ok=false if a pivot is not strictly positive.
struct CholeskyResult {
    Matrix lower;
    bool ok = false;
};
CholeskyResult cholesky(const Matrix& a);

Vector forward_substitute(const Matrix& lower, const Vector& b);   // L y = b
Vector backward_substitute(const Matrix& lower, const Vector& b);  // L' x = b
Vector chol_solve(const Matrix& lower, const Vector& b);           // A x = b, A = L L'
Matrix chol_solve(const Matrix& lower, const Matrix& b);
Matrix chol_inverse(const Matrix& lower);
double chol_log_det(const Matrix& lower);  // log |A|

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
// Eigenvalues descending; columns of vectors are the matching eigenvectors.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};
SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps = 64);

// One-sided Jacobi SVD, A = U diag(s) V'. Singular values descending.
// U is rows(A) x k and V is cols(A) x k with k = min(rows, cols).
struct Svd {
    Matrix u;
    Vector singular_values;
    Matrix v;
};
Svd jacobi_svd(const Matrix& a, int max_sweeps = 64);

// Symmetric positive definite matrix with its Cholesky factor attached.
// Construction enforces the invariants: symmetry within 1e-10 and strictly
// positive Cholesky pivots. A matrix that fails Cholesky by round-off only
// (smallest eigenvalue > -1e-10) gets one 1e-10*I jitter and a retry;
// anything worse throws a numeric_error naming the offending matrix.
class SpdMatrix {
  public:
    SpdMatrix() = default;
    explicit SpdMatrix(Matrix m, const std::string& name = "matrix");

    // Scale an SPD matrix by s > 0 without refactorizing.
    static SpdMatrix scaled(const SpdMatrix& a, double s);

    std::size_t dim() const { return mat_.rows(); }
    const Matrix& mat() const { return mat_; }
    const Matrix& chol_lower() const { return chol_; }
    double operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
    double log_det() const { return chol_log_det(chol_); }
    Matrix inverse() const { return chol_inverse(chol_); }
    Vector solve(const Vector& b) const { return chol_solve(chol_, b); }

    static constexpr double kSymmetryTol = 1e-10;
    static constexpr double kJitter = 1e-10;

  private:
    Matrix mat_;
    Matrix chol_;
};

}  // namespace causalcast

#endif
