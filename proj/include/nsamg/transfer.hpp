#pragma once

#include <string>
#include <vector>

#include "nsamg/sparse.hpp"
#include "nsamg/svd.hpp"

namespace nsamg {

struct CfSplit {
    std::vector<char> labels;      // 'C' or 'F' per row
    std::vector<int> coarse_index; // row -> coarse index, -1 for F rows
    int n_coarse = 0;

    bool is_coarse(int i) const { return labels[i] == 'C'; }
};

// Classical strength of connection on -a_ij: edge i->j iff
// -a_ij >= theta_s * max_k(-a_ik). Positive off-diagonals are weak. Returned
// as a boolean pattern (values 1.0), no diagonal.
SparseMatrix strength_graph(const SparseMatrix& A, double theta_s = 0.25);

// Ruge-Stuben first pass: greedy on measure = number of points strongly
// depending on i, ties broken by lowest row index; measures of candidate
// points incremented when their dependents become F. A repair sweep converts
// any F point without a strong C neighbor into C.
CfSplit cf_split(const SparseMatrix& S);

// Classical (direct) Ruge-Stuben interpolation weights; identity rows at C
// points. Throws SingularRow when a row denominator collapses.
SparseMatrix classical_interp(const SparseMatrix& A, const SparseMatrix& S, const CfSplit& cf);

// Local approximate ideal restriction. R is stored n x n_c (restriction acts
// as R^T); column c has 1 at its own C row and weights over the strong
// F-neighborhood of c at graph distance <= degree. Local systems are solved
// so that (R^T A) vanishes on the neighborhood columns, with a pseudo-inverse
// fallback for singular local blocks.
SparseMatrix lair_restrict(const SparseMatrix& A, const SparseMatrix& S, const CfSplit& cf, int degree = 1);

// Local approximate ideal prolongation: the lAIR construction applied to A^T
// (with strength recomputed on A^T), reinterpreted as interpolation.
SparseMatrix laip_interp(const SparseMatrix& A, const CfSplit& cf, int degree = 1, double theta_s = 0.25);

enum class SingularVectorSide { Right, Left };

// Columns are the first n_c singular vectors in ascending-sigma order.
DenseMatrix svd_transfer(const SvdFactorization& F, int n_c, SingularVectorSide side);

// R = Q^* P, which makes I - Pi a QA-orthogonal correction.
DenseMatrix q_pair_restrict(const DenseMatrix& P, const DenseMatrix& Q);

// The pair P = [v_0..v_{ell-1}, v_{ell+1}, .., v_{n_c}], R = [u_0..u_{n_c-1}]
// (0-based ascending indices). R^T A P is exactly singular by construction.
struct DenseTransferPair {
    DenseMatrix R;
    DenseMatrix P;
};
DenseTransferPair counterexample_pair(const SvdFactorization& F, int n_c, int ell);

// A_c = R^T A P. Throws SingularCoarseOperator when
// sigma_min < 1e-12 * sigma_max.
DenseMatrix coarse_operator(const DenseMatrix& R, const DenseMatrix& A, const DenseMatrix& P);

struct TransferPair {
    SparseMatrix R;
    SparseMatrix P;
    std::string builder_R;
    std::string builder_P;
};

enum class InterpKind { Classical, Laip, Svd, Counterexample };
enum class RestrictKind { ClassicalT, Lair, Qstar, Svd, Counterexample };

struct TransferConfig {
    InterpKind interp = InterpKind::Classical;
    RestrictKind restrict_op = RestrictKind::Lair;
    double theta_s = 0.25;
    int degree = 1;
};

const char* interp_name(InterpKind k);
const char* restrict_name(RestrictKind k);

// Runs strength -> cf_split -> the configured builders. F is required for the
// svd / qstar / counterexample kinds and may be null otherwise.
TransferPair build_transfer_pair(const SparseMatrix& A, const SvdFactorization* F, const TransferConfig& config);

// Full-column-rank check used by TransferPair consumers (densifies).
bool full_column_rank(const SparseMatrix& M, double tol = 1e-10);

} // namespace nsamg
