#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsamg/svd.hpp"

namespace nsamg {

// ---------------------------------------------------------------------------
// Fractional approximation property diagnostics.
//
// fap_constant treats its factorization argument as the eigensystem of the
// SPD metric: columns of F.V are the test vectors, F.sigma the eigenvalues.
// Pass qa_factorization(svd(A)) to measure P against QA (right singular
// vectors) and aq_factorization(svd(A)) to measure R against AQ (left ones).
// ---------------------------------------------------------------------------

struct FapReport {
    double beta = 0.0;
    double eta = 0.0;
    std::vector<double> sigma;      // ascending eigenvalues of the metric
    std::vector<double> per_vector; // K_i per eigenvector
    double uniform_K = 0.0;         // max_i K_i
};

FapReport fap_constant(const DenseMatrix& P, const SvdFactorization& F, double beta, double eta);

struct FapImplicationReport {
    double K_wap = 0.0;  // FAP(1/2, 0)
    double K_sap = 0.0;  // FAP(1, 1)
    double K_ssap = 0.0; // FAP(1, 0)
    std::vector<std::string> violations;
};

// Computes the WAP/SAP/SSAP constants and checks the orderings
// K_W <= K_S, K_SAP <= K_S, K_S <= K_SAP^2 (1e-8 slack each).
FapImplicationReport check_fap_implications(const DenseMatrix& P, const SvdFactorization& F);

struct FapProofEntry {
    double beta;
    double K_beta_beta;
    double K_beta_0;
    bool ok;
};
// K_{beta,0} <= K_{beta,beta}^2 for beta in {1/2, 1, 3/2}.
std::vector<FapProofEntry> check_fap_theorem_proof(const DenseMatrix& P, const SvdFactorization& F);

// ---------------------------------------------------------------------------
// Singular-vector bases for R and P.
// ---------------------------------------------------------------------------

struct BasisDecomposition {
    int k = 0;
    double beta = 1.0;
    double gamma = 1.0;

    DenseMatrix W2hat; // V2^T W2, (n-k) x (n_c-k), W2hat^T Sigma2 W2hat = I
    DenseMatrix Z2hat; // U2^T Z2
    DenseMatrix N2hat; // N21 (I - N11)^{-1} Sigma1^{-beta}
    DenseMatrix M2hat;
    Vector S2;         // cosines between W2 and Q Z2 in QA, ascending

    DenseMatrix B_P; // P * B_P = V [I 0; -N2hat Sigma1^beta  W2hat]
    DenseMatrix B_R;

    // FAP constants restricted to span(V1) / span(U1): the exact quantities
    // the block bounds are stated in terms of.
    double K_P = 0.0; // = |N1 Sigma1^{-beta}|^2
    double K_R = 0.0;
    double delta_P = 0.0;  // sigma_k^beta sqrt(K_P)
    double delta_R = 0.0;
    double Khat_P = 0.0;   // K_P / (1 - delta_P^2)
    double Khat_R = 0.0;
    double delta_PR_sq = 0.0; // sigma_k^{beta+gamma-1} sqrt(Khat_P Khat_R)
    double sigma_k = 0.0;     // k-th smallest singular value
    double sigma_kp1 = 1.0;   // (k+1)-th, or 1 when k = n

    double s1() const { return S2.empty() ? 1.0 : S2.front(); }
};

// Throws DegenerateBlock when I - N11 (or I - M11) is numerically singular,
// RankDeficientP for rank-deficient transfers.
BasisDecomposition build_pr_bases(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F,
                                  int k, double beta, double gamma);

struct StabilityHypotheses {
    bool delta_P_ok = false;  // delta_P < 1/sqrt(2)
    bool delta_R_ok = false;  // delta_R < 1/sqrt(2)
    bool delta_PR_ok = false; // delta_PR^2 < 1/2
    bool s1_ok = false;       // s1 > delta_PR^2/(1-delta_PR^2); waived at k=n_c
    bool all() const { return delta_P_ok && delta_R_ok && delta_PR_ok && s1_ok; }
};

StabilityHypotheses stability_hypotheses(const BasisDecomposition& d);

// Largest k in {n_c, .., 1} whose decomposition satisfies the stability
// hypotheses; nullopt when no k qualifies.
std::optional<BasisDecomposition> select_k(const DenseMatrix& P, const DenseMatrix& R,
                                           const SvdFactorization& F, double beta, double gamma);

// ---------------------------------------------------------------------------
// Block-matrix bounds: [A -B; -C D] with a0 <= |A| <= a1 etc.
// ---------------------------------------------------------------------------

struct BlockBounds {
    double eta0 = 0.0;
    double eta1 = 0.0;
    // Same formulas with the b/c cross-pairing swapped. Algebraically equal
    // for scalar arguments; reported so the two printed forms can be compared.
    double eta0_statement = 0.0;
    double eta1_statement = 0.0;
};

// Throws DeterminantCondition when a0*d0 <= b*c.
BlockBounds block_bounds(double a0, double a1, double b, double c, double d0, double d1);

// ---------------------------------------------------------------------------
// Stability, projections, angles, inner-product equivalence.
// ---------------------------------------------------------------------------

// A = U Sigma V^T reassembled from the factorization.
DenseMatrix assemble_matrix(const SvdFactorization& F);

// Pi = P (R^T A P)^{-1} R^T A. Throws SingularCoarseOperator.
DenseMatrix cgc_projection(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F);

struct StabilityReport {
    int k = 0;
    StabilityHypotheses hypotheses;
    double eta0 = 0.0;
    double eta1 = 0.0;
    double C_Pi_bound = 0.0; // meaningful when hypotheses.all()
    double measured_Pi_QA = 0.0;
    double measured_Pi_l2 = 0.0;
};

StabilityReport stability_bound(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F,
                                const BasisDecomposition& decomp);

// The C_Pi bound alone: (1 + sigma_k^{2b-1} Khat_P)(1 + sigma_k^{2g-1} Khat_R) / eta0,
// with eta0 from the middle-term block bounds (a0 = 1 - delta_PR^2, d0 = s1).
// k_equals_nc drops the complement block. Throws DeterminantCondition when the
// s1 condition fails.
double stability_cpi_bound(double sigma_k, double Khat_P, double Khat_R, double delta_PR_sq, double s1,
                           bool k_equals_nc, double beta, double gamma, double* eta0_out = nullptr,
                           double* eta1_out = nullptr);

enum class ProjectionMetric { L2, QA, AQ };

struct ProjectionMeasurement {
    std::vector<double> amplification; // |Pi v_i|_W / |v_i|_W per right singular vector
    double operator_norm = 0.0;
    double operator_norm_sigma_route = 0.0; // eq. route through Sigma; equals operator_norm for L2/AQ
};

ProjectionMeasurement measure_projection(const DenseMatrix& P, const DenseMatrix& R,
                                         const SvdFactorization& F, ProjectionMetric metric);

struct CgcAngleReport {
    double theta_min = 0.0; // minimal canonical angle between range(Pi) and range(I-Pi) in QA
    double Pi_QA = 0.0;
    double I_minus_Pi_QA = 0.0;
};

// Throws TrivialProjection when Pi is 0 or the identity.
CgcAngleReport cgc_angle(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F);

struct EquivalenceReport {
    double c0_measured = 0.0; // extreme eigenvalues of ((A_c^T A_c)^{1/2}, P^T QA P)
    double c1_measured = 0.0;
    double c0_bound = 0.0;
    double c1_bound = 0.0;
    bool hyp5_ok = false;     // sigma_k^{2 beta - 1} Khat_P < 1
    bool beta_ok = false;     // beta >= 1
    bool bounds_valid = false; // every Lemma hypothesis holds
};

EquivalenceReport inner_product_equivalence(const DenseMatrix& P, const DenseMatrix& R,
                                            const SvdFactorization& F, const BasisDecomposition& decomp);

// ---------------------------------------------------------------------------
// Relaxation-count requirements.
// ---------------------------------------------------------------------------

// Contraction bound for (I - Pi) G^nu with a FAP(beta, 1):
// (4/(4+(2b-1)))^2 ((2b-1)/(4 nu + (2b-1)))^{(2b-1)/2} C_Pi K. Throws
// InvalidBeta for beta <= 1/2.
double two_grid_bound(double C_Pi, double K_P1, int nu, double beta);

struct WcycleRequirements {
    double nu_min_raw = 0.0;
    int nu_min = 0;
    double C_mu = 0.0;      // 2 (c1/c0) K_P C_Pi (theorem-statement form)
    double C_mu_text = 0.0; // 2 (c1/c0) C_Pi (surrounding-text form)
    double rho_bound = 0.0; // 1 / (2 C_mu)
};

WcycleRequirements wcycle_requirements(double c0, double c1, double K_P1, double C_Pi, double beta);

} // namespace nsamg
