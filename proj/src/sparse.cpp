#include "nsamg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsamg {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, const std::vector<int>& ti,
                                         const std::vector<int>& tj, const std::vector<double>& tv) {
    SparseMatrix A(rows, cols);
    std::vector<int> order(ti.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ti[a] != ti[b]) return ti[a] < ti[b];
        return tj[a] < tj[b];
    });
    std::vector<int> counts(rows, 0);
    std::vector<int> ci;
    std::vector<double> cv;
    ci.reserve(ti.size());
    cv.reserve(ti.size());
    std::size_t k = 0;
    while (k < order.size()) {
        const int i = ti[order[k]];
        const int j = tj[order[k]];
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw Error(ErrorCode::DimensionMismatch, "triplet index out of range");
        double v = 0.0;
        while (k < order.size() && ti[order[k]] == i && tj[order[k]] == j) {
            v += tv[order[k]];
            ++k;
        }
        if (v != 0.0) {
            ci.push_back(j);
            cv.push_back(v);
            ++counts[i];
        }
    }
    A.row_ptr_.assign(rows + 1, 0);
    for (int i = 0; i < rows; ++i) A.row_ptr_[i + 1] = A.row_ptr_[i] + counts[i];
    A.col_idx_ = std::move(ci);
    A.values_ = std::move(cv);
    return A;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& A, double drop_tol) {
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (std::fabs(A(i, j)) > drop_tol) {
                ti.push_back(i);
                tj.push_back(j);
                tv.push_back(A(i, j));
            }
    return from_triplets(A.rows(), A.cols(), ti, tj, tv);
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<int> ti(n), tj(n);
    std::vector<double> tv(n, 1.0);
    std::iota(ti.begin(), ti.end(), 0);
    std::iota(tj.begin(), tj.end(), 0);
    return from_triplets(n, n, ti, tj, tv);
}

double SparseMatrix::at(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] == j) return values_[k];
    return 0.0;
}

Vector SparseMatrix::diagonal() const {
    Vector d(std::min(rows_, cols_), 0.0);
    for (int i = 0; i < static_cast<int>(d.size()); ++i) d[i] = at(i, i);
    return d;
}

DenseMatrix SparseMatrix::to_dense() const {
    if (rows_ > kDenseCap || cols_ > kDenseCap)
        throw Error(ErrorCode::TooLarge, "to_dense: dimension exceeds dense cap");
    DenseMatrix A(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) A(i, col_idx_[k]) = values_[k];
    return A;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<int> ti, tj;
    std::vector<double> tv;
    ti.reserve(values_.size());
    tj.reserve(values_.size());
    tv.reserve(values_.size());
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            ti.push_back(col_idx_[k]);
            tj.push_back(i);
            tv.push_back(values_[k]);
        }
    return from_triplets(cols_, rows_, ti, tj, tv);
}

Vector SparseMatrix::apply(const Vector& x) const {
    if (static_cast<int>(x.size()) != cols_)
        throw Error(ErrorCode::DimensionMismatch, "sparse apply shape mismatch");
    Vector y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[i] = s;
    }
    return y;
}

Vector SparseMatrix::apply_transposed(const Vector& x) const {
    if (static_cast<int>(x.size()) != rows_)
        throw Error(ErrorCode::DimensionMismatch, "sparse apply_transposed shape mismatch");
    Vector y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
    }
    return y;
}

bool SparseMatrix::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool SparseMatrix::pattern_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (at(col_idx_[k], i) == 0.0 && values_[k] != 0.0) return false;
    return true;
}

bool SparseMatrix::value_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            if (std::fabs(at(col_idx_[k], i) - values_[k]) > tol) return false;
    return true;
}

SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B) {
    if (A.cols() != B.rows()) throw Error(ErrorCode::DimensionMismatch, "sparse multiply shape mismatch");
    std::vector<int> ti, tj;
    std::vector<double> tv;
    Vector acc(B.cols(), 0.0);
    std::vector<int> touched;
    for (int i = 0; i < A.rows(); ++i) {
        touched.clear();
        for (int ka = A.row_ptr_[i]; ka < A.row_ptr_[i + 1]; ++ka) {
            const int k = A.col_idx_[ka];
            const double av = A.values_[ka];
            for (int kb = B.row_ptr_[k]; kb < B.row_ptr_[k + 1]; ++kb) {
                const int j = B.col_idx_[kb];
                if (acc[j] == 0.0) touched.push_back(j);
                acc[j] += av * B.values_[kb];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int j : touched) {
            if (acc[j] != 0.0) {
                ti.push_back(i);
                tj.push_back(j);
                tv.push_back(acc[j]);
            }
            acc[j] = 0.0;
        }
    }
    return SparseMatrix::from_triplets(A.rows(), B.cols(), ti, tj, tv);
}

SparseMatrix scale_rows(const SparseMatrix& A, const Vector& d) {
    if (static_cast<int>(d.size()) != A.rows())
        throw Error(ErrorCode::DimensionMismatch, "scale_rows shape mismatch");
    SparseMatrix B = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int k = B.row_ptr_[i]; k < B.row_ptr_[i + 1]; ++k) B.values_[k] *= d[i];
    return B;
}

} // namespace nsamg
