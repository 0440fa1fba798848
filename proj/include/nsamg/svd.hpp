#pragma once

#include <vector>

#include "nsamg/dense.hpp"

namespace nsamg {

// A = U diag(sigma) V^T with sigma ascending (sigma[0] smallest). For square
// inputs U and V are square orthogonal; for rectangular inputs the economy
// form is returned (U is rows x min(rows,cols) when rows >= cols).
struct SvdFactorization {
    DenseMatrix U;
    Vector sigma;
    DenseMatrix V;
};

// One-sided Jacobi, deterministic sweep order, relative rotation threshold
// 1e-12, at most 60 sweeps. Column signs fixed so the first nonzero entry of
// each V column is positive. Throws NonFinite on NaN/Inf entries.
SvdFactorization svd(const DenseMatrix& A);

double spectral_norm(const DenseMatrix& A);

// sigma_max by deterministic blocked subspace iteration on A^T A (block 4,
// Rayleigh-Ritz). Much cheaper than a full Jacobi factorization on the hot
// analysis paths; accuracy ~1e-12 relative for spectra with any reasonable
// gap, and within the cluster width otherwise.
double spectral_norm_estimate(const DenseMatrix& A);

// Unitary polar factor Q = V U^T. Throws SingularInput when
// sigma_min <= 1e-14 * sigma_max.
DenseMatrix polar_q(const SvdFactorization& F);

// Symmetric eigendecomposition M = E diag(lambda) E^T, lambda ascending.
// Cyclic two-sided Jacobi.
struct SymmetricEigen {
    Vector lambda;
    DenseMatrix E;
};
SymmetricEigen eigen_symmetric(const DenseMatrix& M);

// M^p for SPD M via symmetric eigendecomposition. Throws NotSpd when M is
// not symmetric to 1e-10 or has an eigenvalue below -1e-10*lambda_max (or a
// nonpositive eigenvalue when p < 0).
DenseMatrix spd_fractional_power(const DenseMatrix& M, double p);

// Moore-Penrose pseudo-inverse truncating singular values below
// rtol * sigma_max. The zero matrix maps to the zero matrix.
DenseMatrix pseudo_inverse(const DenseMatrix& A, double rtol = 1e-12);

// sqrt(<Wv, v>) clamped at zero for roundoff. W symmetric PSD.
double weighted_norm(const Vector& v, const DenseMatrix& W);

// Largest singular value of W^{1/2} M W^{-1/2}, i.e. the operator norm of M
// in the W inner product. W must be SPD.
double operator_norm_weighted(const DenseMatrix& M, const DenseMatrix& W);
double operator_norm_weighted(const DenseMatrix& M, const DenseMatrix& W_half,
                              const DenseMatrix& W_half_inv);

// Views of QA = V Sigma V^T and AQ = U Sigma U^T as factorizations whose
// V-columns carry the eigenvectors. fap_constant and friends consume these.
SvdFactorization qa_factorization(const SvdFactorization& F);
SvdFactorization aq_factorization(const SvdFactorization& F);

// V Sigma^p V^T and U Sigma^p U^T assembled directly from the factors.
DenseMatrix qa_power(const SvdFactorization& F, double p);
DenseMatrix aq_power(const SvdFactorization& F, double p);

} // namespace nsamg
