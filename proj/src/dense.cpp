#include "nsamg/dense.hpp"

#include <cmath>
#include <utility>

namespace nsamg {

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<std::size_t>(rows) * cols)
        throw Error(ErrorCode::DimensionMismatch, "entry count does not match rows*cols");
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

DenseMatrix DenseMatrix::diagonal(const Vector& d) {
    DenseMatrix D(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < D.rows(); ++i) D(i, i) = d[i];
    return D;
}

bool DenseMatrix::all_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix T(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

DenseMatrix DenseMatrix::block(int row0, int col0, int nrows, int ncols) const {
    DenseMatrix B(nrows, ncols);
    for (int i = 0; i < nrows; ++i)
        for (int j = 0; j < ncols; ++j) B(i, j) = (*this)(row0 + i, col0 + j);
    return B;
}

void DenseMatrix::set_block(int row0, int col0, const DenseMatrix& B) {
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) (*this)(row0 + i, col0 + j) = B(i, j);
}

Vector DenseMatrix::col(int j) const {
    Vector v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void DenseMatrix::set_col(int j, const Vector& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::fabs(v));
    return m;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) throw Error(ErrorCode::DimensionMismatch, "matmul shape mismatch");
    DenseMatrix C(A.rows(), B.cols());
    const int n = A.rows(), m = A.cols(), p = B.cols();
    for (int i = 0; i < n; ++i) {
        double* ci = &C.data()[static_cast<std::size_t>(i) * p];
        for (int k = 0; k < m; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            const double* bk = &B.data()[static_cast<std::size_t>(k) * p];
            for (int j = 0; j < p; ++j) ci[j] += aik * bk[j];
        }
    }
    return C;
}

DenseMatrix operator+(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw Error(ErrorCode::DimensionMismatch, "matrix add shape mismatch");
    DenseMatrix C = A;
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] += B.data()[i];
    return C;
}

DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw Error(ErrorCode::DimensionMismatch, "matrix sub shape mismatch");
    DenseMatrix C = A;
    for (std::size_t i = 0; i < C.data().size(); ++i) C.data()[i] -= B.data()[i];
    return C;
}

DenseMatrix operator*(double s, const DenseMatrix& A) {
    DenseMatrix C = A;
    for (double& v : C.data()) v *= s;
    return C;
}

Vector matvec(const DenseMatrix& A, const Vector& x) {
    if (static_cast<int>(x.size()) != A.cols())
        throw Error(ErrorCode::DimensionMismatch, "matvec shape mismatch");
    Vector y(A.rows(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_transposed(const DenseMatrix& A, const Vector& x) {
    if (static_cast<int>(x.size()) != A.rows())
        throw Error(ErrorCode::DimensionMismatch, "matvec_transposed shape mismatch");
    Vector y(A.cols(), 0.0);
    for (int i = 0; i < A.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int j = 0; j < A.cols(); ++j) y[j] += A(i, j) * xi;
    }
    return y;
}

double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

void axpy(double a, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector operator-(const Vector& x, const Vector& y) {
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

DenseMatrix hcat(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.rows() != B.rows()) throw Error(ErrorCode::DimensionMismatch, "hcat row mismatch");
    DenseMatrix C(A.rows(), A.cols() + B.cols());
    C.set_block(0, 0, A);
    C.set_block(0, A.cols(), B);
    return C;
}

LuFactorization::LuFactorization(const DenseMatrix& A) : lu_(A), perm_(A.rows()) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "LU requires square matrix");
    const int n = A.rows();
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        if (piv != k) {
            std::swap(perm_[piv], perm_[k]);
            for (int j = 0; j < n; ++j) std::swap(lu_(piv, j), lu_(k, j));
        }
        const double d = lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / d;
            lu_(i, k) = f;
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(const Vector& b) const {
    if (singular_) throw Error(ErrorCode::SingularInput, "LU solve on singular matrix");
    const int n = lu_.rows();
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * y[j];
        y[i] = s / lu_(i, i);
    }
    return y;
}

DenseMatrix LuFactorization::solve(const DenseMatrix& B) const {
    DenseMatrix X(B.rows(), B.cols());
    for (int j = 0; j < B.cols(); ++j) X.set_col(j, solve(B.col(j)));
    return X;
}

DenseMatrix inverse(const DenseMatrix& A) {
    LuFactorization lu(A);
    if (lu.singular()) throw Error(ErrorCode::SingularInput, "inverse of singular matrix");
    return lu.solve(DenseMatrix::identity(A.rows()));
}

DenseMatrix qr_orthonormal(const DenseMatrix& A) {
    const int m = A.rows(), n = A.cols();
    if (n == 0) return DenseMatrix(m, 0);
    if (m < n) throw Error(ErrorCode::DimensionMismatch, "qr_orthonormal requires rows >= cols");
    DenseMatrix R = A;
    std::vector<Vector> vs; // Householder vectors
    vs.reserve(n);
    for (int k = 0; k < n; ++k) {
        Vector v(m, 0.0);
        double nrm = 0.0;
        for (int i = k; i < m; ++i) {
            v[i] = R(i, k);
            nrm += v[i] * v[i];
        }
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw Error(ErrorCode::RankDeficientP, "qr_orthonormal: rank-deficient input");
        const double alpha = (v[k] >= 0.0) ? -nrm : nrm;
        v[k] -= alpha;
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 > 0.0) {
            for (int j = k; j < n; ++j) {
                double s = 0.0;
                for (int i = k; i < m; ++i) s += v[i] * R(i, j);
                const double f = 2.0 * s / vnorm2;
                for (int i = k; i < m; ++i) R(i, j) -= f * v[i];
            }
        }
        vs.push_back(std::move(v));
    }
    // Accumulate Q = H_0 ... H_{n-1} applied to the first n identity columns.
    DenseMatrix Q(m, n);
    for (int j = 0; j < n; ++j) Q(j, j) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        const Vector& v = vs[k];
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += v[i] * Q(i, j);
            const double f = 2.0 * s / vnorm2;
            for (int i = k; i < m; ++i) Q(i, j) -= f * v[i];
        }
    }
    return Q;
}

} // namespace nsamg
