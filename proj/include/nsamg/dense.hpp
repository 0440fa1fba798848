#pragma once

#include <cstddef>
#include <vector>

#include "nsamg/errors.hpp"

namespace nsamg {

using Vector = std::vector<double>;

// Dense real matrix, row-major. Desk-scale: everything is O(n^3)-friendly and
// capped at kDenseCap on the analysis paths.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}
    DenseMatrix(int rows, int cols, std::vector<double> entries);

    static DenseMatrix identity(int n);
    static DenseMatrix diagonal(const Vector& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

    bool all_finite() const;

    DenseMatrix transposed() const;
    DenseMatrix block(int row0, int col0, int nrows, int ncols) const;
    void set_block(int row0, int col0, const DenseMatrix& B);
    Vector col(int j) const;
    void set_col(int j, const Vector& v);

    double frobenius_norm() const;
    double max_abs() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

inline constexpr int kDenseCap = 5000;

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B);
DenseMatrix operator*(double s, const DenseMatrix& A);
Vector matvec(const DenseMatrix& A, const Vector& x);
Vector matvec_transposed(const DenseMatrix& A, const Vector& x);

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
void axpy(double a, const Vector& x, Vector& y); // y += a*x
Vector operator-(const Vector& x, const Vector& y);

// Horizontal concatenation [A B].
DenseMatrix hcat(const DenseMatrix& A, const DenseMatrix& B);

// LU factorization with partial pivoting.
class LuFactorization {
public:
    explicit LuFactorization(const DenseMatrix& A);
    bool singular() const { return singular_; }
    Vector solve(const Vector& b) const;
    DenseMatrix solve(const DenseMatrix& B) const;

private:
    DenseMatrix lu_;
    std::vector<int> perm_;
    bool singular_ = false;
};

DenseMatrix inverse(const DenseMatrix& A); // throws SingularInput

// Thin Householder QR; returns Q with orthonormal columns spanning range(A).
// Requires full column rank.
DenseMatrix qr_orthonormal(const DenseMatrix& A);

} // namespace nsamg
