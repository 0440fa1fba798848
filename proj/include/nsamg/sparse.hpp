#pragma once

#include <vector>

#include "nsamg/dense.hpp"

namespace nsamg {

// Compressed-row sparse matrix. Column indices strictly increasing within
// each row; no explicit zeros stored.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

    // Builds canonical CSR from (row, col, value) triplets: duplicates are
    // summed, exact zeros dropped.
    static SparseMatrix from_triplets(int rows, int cols,
                                      const std::vector<int>& ti, const std::vector<int>& tj,
                                      const std::vector<double>& tv);
    static SparseMatrix from_dense(const DenseMatrix& A, double drop_tol = 0.0);
    static SparseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double at(int i, int j) const; // 0.0 when absent
    Vector diagonal() const;

    DenseMatrix to_dense() const;
    SparseMatrix transposed() const;

    Vector apply(const Vector& x) const;            // A x
    Vector apply_transposed(const Vector& x) const; // A^T x

    bool all_finite() const;
    bool pattern_symmetric() const;
    bool value_symmetric(double tol) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;

    friend SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);
    friend SparseMatrix scale_rows(const SparseMatrix& A, const Vector& d);
};

SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);
SparseMatrix scale_rows(const SparseMatrix& A, const Vector& d); // diag(d) * A

} // namespace nsamg
