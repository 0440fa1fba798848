#include "nsamg/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsamg/transfer.hpp"

namespace nsamg {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

DenseMatrix diag_power(const Vector& sigma, int lo, int hi, double p) {
    Vector d(hi - lo);
    for (int i = lo; i < hi; ++i) {
        if (sigma[i] <= 0.0 && p < 0.0)
            throw Error(ErrorCode::SingularInput, "zero singular value with negative power");
        d[i - lo] = std::pow(sigma[i], p);
    }
    return DenseMatrix::diagonal(d);
}

void require_full_rank(const DenseMatrix& P, const char* who) {
    const SvdFactorization F = svd(P);
    if (F.sigma.empty() || F.sigma.front() <= 1e-10)
        throw Error(ErrorCode::RankDeficientP, std::string(who) + ": transfer operator is rank deficient");
}

// Orthonormal basis of range(M) via SVD, keeping directions with
// sigma > rtol * sigma_max. Columns returned in descending-sigma order.
DenseMatrix orthonormal_range(const DenseMatrix& M, double rtol = 1e-12) {
    const SvdFactorization F = svd(M);
    const double smax = F.sigma.empty() ? 0.0 : F.sigma.back();
    int rank = 0;
    for (double s : F.sigma)
        if (s > rtol * smax) ++rank;
    DenseMatrix B(M.rows(), rank);
    const int n = static_cast<int>(F.sigma.size());
    for (int j = 0; j < rank; ++j) B.set_col(j, F.U.col(n - 1 - j));
    return B;
}

} // namespace

FapReport fap_constant(const DenseMatrix& P, const SvdFactorization& F, double beta, double eta) {
    const int n = F.V.rows();
    if (P.rows() != n) throw Error(ErrorCode::DimensionMismatch, "fap_constant: shape mismatch");
    require_full_rank(P, "fap_constant");

    const double metric_norm = F.sigma.empty() ? 0.0 : F.sigma.back();
    if (metric_norm <= 0.0) throw Error(ErrorCode::SingularInput, "fap_constant: zero metric");

    // Minimizing v_c: the A^eta-orthogonal projection of each eigenvector
    // onto range(P) (Euclidean when eta = 0).
    DenseMatrix G; // metric power, only needed for eta > 0
    DenseMatrix PtG;
    if (eta > 0.0) {
        G = qa_power(F, eta);
        PtG = matmul(P.transposed(), G);
    } else {
        PtG = P.transposed();
    }
    const DenseMatrix M = matmul(PtG, P);
    LuFactorization lu(M);
    if (lu.singular()) throw Error(ErrorCode::RankDeficientP, "fap_constant: normal equations singular");
    const DenseMatrix coeff = lu.solve(matmul(PtG, F.V)); // n_c x n
    const DenseMatrix resid = F.V - matmul(P, coeff);     // n x n

    FapReport rep;
    rep.beta = beta;
    rep.eta = eta;
    rep.sigma = F.sigma;
    rep.per_vector.resize(n);
    const DenseMatrix Gres = (eta > 0.0) ? matmul(G, resid) : resid;
    for (int i = 0; i < n; ++i) {
        if (F.sigma[i] <= 0.0) throw Error(ErrorCode::SingularInput, "fap_constant: zero eigenvalue");
        double quad = 0.0;
        for (int r = 0; r < n; ++r) quad += resid(r, i) * Gres(r, i);
        quad = std::max(quad, 0.0);
        rep.per_vector[i] = quad * std::pow(metric_norm, 2.0 * beta - eta) / std::pow(F.sigma[i], 2.0 * beta);
    }

    // The constant that holds for EVERY vector, not only the eigenvectors:
    // |A^{eta/2} (I - Pi_eta) V Sigma^{-beta}|^2. Substituting v = V S^{-b} z
    // turns the FAP quotient into a plain operator norm.
    DenseMatrix scaled = resid;
    for (int i = 0; i < n; ++i) {
        const double f = std::pow(F.sigma[i], -beta);
        for (int r = 0; r < n; ++r) scaled(r, i) *= f;
    }
    if (eta > 0.0) scaled = matmul(qa_power(F, eta / 2.0), scaled);
    const double op = spectral_norm_estimate(scaled);
    rep.uniform_K = std::max(op * op * std::pow(metric_norm, 2.0 * beta - eta),
                             *std::max_element(rep.per_vector.begin(), rep.per_vector.end()));
    return rep;
}

FapImplicationReport check_fap_implications(const DenseMatrix& P, const SvdFactorization& F) {
    FapImplicationReport rep;
    rep.K_wap = fap_constant(P, F, 0.5, 0.0).uniform_K;
    rep.K_sap = fap_constant(P, F, 1.0, 1.0).uniform_K;
    rep.K_ssap = fap_constant(P, F, 1.0, 0.0).uniform_K;
    const double slack = 1e-8;
    if (rep.K_wap > rep.K_ssap + slack) rep.violations.push_back("K_wap > K_ssap");
    if (rep.K_sap > rep.K_ssap + slack) rep.violations.push_back("K_sap > K_ssap");
    if (rep.K_ssap > rep.K_sap * rep.K_sap + slack) rep.violations.push_back("K_ssap > K_sap^2");
    return rep;
}

std::vector<FapProofEntry> check_fap_theorem_proof(const DenseMatrix& P, const SvdFactorization& F) {
    std::vector<FapProofEntry> entries;
    for (double beta : {0.5, 1.0, 1.5}) {
        FapProofEntry e;
        e.beta = beta;
        e.K_beta_beta = fap_constant(P, F, beta, beta).uniform_K;
        e.K_beta_0 = fap_constant(P, F, beta, 0.0).uniform_K;
        e.ok = e.K_beta_0 <= e.K_beta_beta * e.K_beta_beta + 1e-8;
        entries.push_back(e);
    }
    return entries;
}

namespace {

struct SideDecomposition {
    DenseMatrix C1;     // pinv(T) * B1: coefficients of the projected leading vectors
    DenseMatrix IH11inv;
    DenseMatrix Hat2;   // H21 (I-H11)^{-1} Sigma1^{-pow}
    DenseMatrix Script2; // B2^T * complement basis, metric-normalized
    DenseMatrix C2;     // coefficients of the complement basis in T
    double K_sub = 0.0;
    double delta = 0.0;
};

// Shared construction for the P side (T=P, basis=V, metric QA) and the R side
// (T=R, basis=U, metric AQ).
SideDecomposition decompose_side(const DenseMatrix& T, const DenseMatrix& basis, const Vector& sigma,
                                 int k, double pow_, const char* who) {
    const int n = basis.rows();
    const int n_c = T.cols();
    SideDecomposition out;

    const DenseMatrix B1 = basis.block(0, 0, n, k);
    const DenseMatrix B2 = basis.block(0, k, n, n - k);

    const DenseMatrix Tpinv = pseudo_inverse(T);
    out.C1 = matmul(Tpinv, B1);                    // n_c x k
    const DenseMatrix W1 = matmul(T, out.C1);      // projection of B1 onto range(T)
    const DenseMatrix N1 = B1 - W1;

    const DenseMatrix H11 = matmul(B1.transposed(), N1);
    const DenseMatrix H21 = matmul(B2.transposed(), N1);

    const DenseMatrix NS = matmul(N1, diag_power(sigma, 0, k, -pow_));
    out.K_sub = spectral_norm(NS);
    out.K_sub *= out.K_sub;
    out.delta = std::pow(sigma[k - 1], pow_) * std::sqrt(out.K_sub);

    DenseMatrix IH11 = DenseMatrix::identity(k) - H11;
    {
        const SvdFactorization Fi = svd(IH11);
        if (Fi.sigma.front() < 1e-12)
            throw Error(ErrorCode::DegenerateBlock, std::string(who) + ": I - N11 numerically singular");
    }
    out.IH11inv = inverse(IH11);
    out.Hat2 = matmul(H21, matmul(out.IH11inv, diag_power(sigma, 0, k, -pow_)));

    if (k < n_c) {
        // Complement of W1 inside range(T), then metric-normalize so that
        // Script2^T Sigma2 Script2 = I.
        const DenseMatrix Ton = qr_orthonormal(T);
        const DenseMatrix W1on = orthonormal_range(W1);
        const DenseMatrix Gproj = Ton - matmul(W1on, matmul(W1on.transposed(), Ton));
        DenseMatrix W2 = orthonormal_range(Gproj, 1e-8);
        if (W2.cols() != n_c - k)
            throw Error(ErrorCode::DegenerateBlock, std::string(who) + ": complement dimension collapsed");
        DenseMatrix S2W = matmul(B2.transposed(), W2); // (n-k) x (n_c-k)
        DenseMatrix Gw(n_c - k, n_c - k);
        for (int r = 0; r < n_c - k; ++r)
            for (int c = 0; c < n_c - k; ++c) {
                double s = 0.0;
                for (int i = 0; i < n - k; ++i) s += S2W(i, r) * sigma[k + i] * S2W(i, c);
                Gw(r, c) = s;
            }
        const DenseMatrix Gw_isqrt = spd_fractional_power(Gw, -0.5);
        W2 = matmul(W2, Gw_isqrt);
        out.Script2 = matmul(B2.transposed(), W2);
        out.C2 = matmul(Tpinv, W2);
    } else {
        out.Script2 = DenseMatrix(n - k, 0);
        out.C2 = DenseMatrix(n_c, 0);
    }
    return out;
}

} // namespace

BasisDecomposition build_pr_bases(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F,
                                  int k, double beta, double gamma) {
    const int n = F.V.rows();
    const int n_c = P.cols();
    if (R.cols() != n_c || P.rows() != n || R.rows() != n)
        throw Error(ErrorCode::DimensionMismatch, "build_pr_bases: shape mismatch");
    if (k < 1 || k > n_c) throw Error(ErrorCode::DimensionMismatch, "build_pr_bases: k out of range");
    require_full_rank(P, "build_pr_bases(P)");
    require_full_rank(R, "build_pr_bases(R)");

    SideDecomposition ps = decompose_side(P, F.V, F.sigma, k, beta, "build_pr_bases(P)");
    SideDecomposition rs = decompose_side(R, F.U, F.sigma, k, gamma, "build_pr_bases(R)");

    BasisDecomposition d;
    d.k = k;
    d.beta = beta;
    d.gamma = gamma;
    d.K_P = ps.K_sub;
    d.K_R = rs.K_sub;
    d.delta_P = ps.delta;
    d.delta_R = rs.delta;
    d.sigma_k = F.sigma[k - 1];
    d.sigma_kp1 = (k < n) ? F.sigma[k] : 1.0;
    d.Khat_P = (d.delta_P < 1.0) ? d.K_P / (1.0 - d.delta_P * d.delta_P) : std::numeric_limits<double>::infinity();
    d.Khat_R = (d.delta_R < 1.0) ? d.K_R / (1.0 - d.delta_R * d.delta_R) : std::numeric_limits<double>::infinity();
    d.delta_PR_sq = std::pow(d.sigma_k, beta + gamma - 1.0) * std::sqrt(d.Khat_P * d.Khat_R);
    d.N2hat = ps.Hat2;
    d.M2hat = rs.Hat2;

    DenseMatrix rotP = DenseMatrix::identity(0), rotR = rotP;
    if (k < n_c) {
        // Rotate the complement bases so Z2hat^T Sigma2 W2hat is diagonal
        // with ascending entries: the cosines of the angles between W2 and
        // Q Z2 in the QA inner product.
        DenseMatrix Tmat(n_c - k, n_c - k);
        for (int r = 0; r < n_c - k; ++r)
            for (int c = 0; c < n_c - k; ++c) {
                double s = 0.0;
                for (int i = 0; i < n - k; ++i) s += rs.Script2(i, r) * F.sigma[k + i] * ps.Script2(i, c);
                Tmat(r, c) = s;
            }
        const SvdFactorization Ft = svd(Tmat);
        d.S2 = Ft.sigma;
        d.W2hat = matmul(ps.Script2, Ft.V);
        d.Z2hat = matmul(rs.Script2, Ft.U);
        rotP = Ft.V;
        rotR = Ft.U;
    } else {
        d.W2hat = DenseMatrix(n - k, 0);
        d.Z2hat = DenseMatrix(n - k, 0);
    }

    // B_P = [C1 (I-N11)^{-1} | C2 rot]; same shape for B_R.
    d.B_P = DenseMatrix(n_c, n_c);
    d.B_P.set_block(0, 0, matmul(ps.C1, ps.IH11inv));
    if (k < n_c) d.B_P.set_block(0, k, matmul(ps.C2, rotP));
    d.B_R = DenseMatrix(n_c, n_c);
    d.B_R.set_block(0, 0, matmul(rs.C1, rs.IH11inv));
    if (k < n_c) d.B_R.set_block(0, k, matmul(rs.C2, rotR));
    return d;
}

StabilityHypotheses stability_hypotheses(const BasisDecomposition& d) {
    StabilityHypotheses h;
    h.delta_P_ok = d.delta_P < kInvSqrt2;
    h.delta_R_ok = d.delta_R < kInvSqrt2;
    h.delta_PR_ok = d.delta_PR_sq < 0.5;
    if (d.S2.empty()) {
        h.s1_ok = true; // k = n_c: condition waived
    } else {
        h.s1_ok = d.delta_PR_sq < 1.0 && d.s1() > d.delta_PR_sq / (1.0 - d.delta_PR_sq);
    }
    return h;
}

std::optional<BasisDecomposition> select_k(const DenseMatrix& P, const DenseMatrix& R,
                                           const SvdFactorization& F, double beta, double gamma) {
    const int n_c = P.cols();
    for (int k = n_c; k >= 1; --k) {
        BasisDecomposition d;
        try {
            d = build_pr_bases(P, R, F, k, beta, gamma);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::DegenerateBlock) continue;
            throw;
        }
        if (stability_hypotheses(d).all()) return d;
    }
    return std::nullopt;
}

BlockBounds block_bounds(double a0, double a1, double b, double c, double d0, double d1) {
    if (!(a0 > 0.0) || !(d0 > 0.0) || b < 0.0 || c < 0.0 || a1 < a0 || d1 < d0)
        throw Error(ErrorCode::InvalidSpec, "block_bounds: invalid bound ordering");
    if (!(a0 * d0 > b * c))
        throw Error(ErrorCode::DeterminantCondition, "block_bounds: a0*d0 <= b*c");

    const auto lower = [](double a, double bb, double cc, double dd) {
        const double disc = (a * a + cc * cc - bb * bb - dd * dd) * (a * a + cc * cc - bb * bb - dd * dd) +
                            4.0 * (a * bb + cc * dd) * (a * bb + cc * dd);
        return (a * a + bb * bb + cc * cc + dd * dd - std::sqrt(disc)) / 2.0;
    };
    const auto upper = [](double a, double bb, double cc, double dd) {
        const double disc = (a * a + cc * cc - bb * bb - dd * dd) * (a * a + cc * cc - bb * bb - dd * dd) +
                            4.0 * (a * bb + cc * dd) * (a * bb + cc * dd);
        return (a * a + bb * bb + cc * cc + dd * dd + std::sqrt(disc)) / 2.0;
    };

    BlockBounds out;
    out.eta0 = lower(a0, b, c, d0);
    out.eta1 = upper(a1, b, c, d1);
    // Statement pairing: swap the roles of b and c inside the discriminant.
    out.eta0_statement = lower(a0, c, b, d0);
    out.eta1_statement = upper(a1, c, b, d1);
    return out;
}

DenseMatrix assemble_matrix(const SvdFactorization& F) {
    return matmul(F.U, matmul(DenseMatrix::diagonal(F.sigma), F.V.transposed()));
}

DenseMatrix cgc_projection(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F) {
    const DenseMatrix A = assemble_matrix(F);
    const DenseMatrix Ac = coarse_operator(R, A, P);
    const DenseMatrix RtA = matmul(R.transposed(), A);
    LuFactorization lu(Ac);
    if (lu.singular()) throw Error(ErrorCode::SingularCoarseOperator, "coarse operator singular");
    return matmul(P, lu.solve(RtA));
}

double stability_cpi_bound(double sigma_k, double Khat_P, double Khat_R, double delta_PR_sq, double s1,
                           bool k_equals_nc, double beta, double gamma, double* eta0_out, double* eta1_out) {
    const double b = k_equals_nc ? 0.0 : std::pow(sigma_k, gamma - 0.5) * std::sqrt(Khat_R);
    const double c = k_equals_nc ? 0.0 : std::pow(sigma_k, beta - 0.5) * std::sqrt(Khat_P);
    const double a0 = 1.0 - delta_PR_sq;
    const double a1 = 1.0 + delta_PR_sq;
    // cosines can carry 1 + eps of roundoff
    const double d0 = k_equals_nc ? 1.0 : std::min(s1, 1.0);
    if (!(a0 > 0.0)) throw Error(ErrorCode::DeterminantCondition, "stability bound: delta_PR^2 >= 1");
    const BlockBounds bb = block_bounds(a0, a1, b, c, d0, 1.0);
    if (eta0_out) *eta0_out = bb.eta0;
    if (eta1_out) *eta1_out = bb.eta1;
    const double numP = 1.0 + std::pow(sigma_k, 2.0 * beta - 1.0) * Khat_P;
    const double numR = 1.0 + std::pow(sigma_k, 2.0 * gamma - 1.0) * Khat_R;
    return numP * numR / bb.eta0;
}

StabilityReport stability_bound(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F,
                                const BasisDecomposition& d) {
    StabilityReport rep;
    rep.k = d.k;
    rep.hypotheses = stability_hypotheses(d);

    rep.C_Pi_bound = std::numeric_limits<double>::infinity();
    rep.eta0 = std::numeric_limits<double>::quiet_NaN();
    rep.eta1 = std::numeric_limits<double>::quiet_NaN();
    if (rep.hypotheses.all()) {
        rep.C_Pi_bound = stability_cpi_bound(d.sigma_k, d.Khat_P, d.Khat_R, d.delta_PR_sq, d.s1(), d.S2.empty(),
                                             d.beta, d.gamma, &rep.eta0, &rep.eta1);
    }

    const DenseMatrix Pi = cgc_projection(P, R, F);
    const DenseMatrix Wh = qa_power(F, 0.5);
    const DenseMatrix Whi = qa_power(F, -0.5);
    rep.measured_Pi_QA = operator_norm_weighted(Pi, Wh, Whi);
    rep.measured_Pi_l2 = spectral_norm(Pi);
    return rep;
}

ProjectionMeasurement measure_projection(const DenseMatrix& P, const DenseMatrix& R,
                                         const SvdFactorization& F, ProjectionMetric metric) {
    const int n = F.V.rows();
    const DenseMatrix Pi = cgc_projection(P, R, F);

    DenseMatrix Wh, Whi;
    switch (metric) {
        case ProjectionMetric::L2:
            Wh = DenseMatrix::identity(n);
            Whi = Wh;
            break;
        case ProjectionMetric::QA:
            Wh = qa_power(F, 0.5);
            Whi = qa_power(F, -0.5);
            break;
        case ProjectionMetric::AQ:
            Wh = aq_power(F, 0.5);
            Whi = aq_power(F, -0.5);
            break;
    }

    ProjectionMeasurement out;
    const DenseMatrix PiV = matmul(Wh, matmul(Pi, F.V));
    const DenseMatrix WV = matmul(Wh, F.V);
    out.amplification.resize(n);
    for (int i = 0; i < n; ++i) {
        double num = 0.0, den = 0.0;
        for (int r = 0; r < n; ++r) {
            num += PiV(r, i) * PiV(r, i);
            den += WV(r, i) * WV(r, i);
        }
        out.amplification[i] = std::sqrt(num / den);
    }
    out.operator_norm = operator_norm_weighted(Pi, Wh, Whi);

    if (metric == ProjectionMetric::QA) {
        const DenseMatrix Ps = matmul(F.V.transposed(), P);
        const DenseMatrix Rs = matmul(F.U.transposed(), R);
        const DenseMatrix Ac = matmul(Rs.transposed(), matmul(DenseMatrix::diagonal(F.sigma), Ps));
        LuFactorization lu(Ac);
        if (lu.singular()) throw Error(ErrorCode::SingularCoarseOperator, "coarse operator singular");
        DenseMatrix Sh(n, n);
        for (int i = 0; i < n; ++i) Sh(i, i) = std::sqrt(F.sigma[i]);
        const DenseMatrix route = matmul(Sh, matmul(Ps, lu.solve(matmul(Rs.transposed(), Sh))));
        out.operator_norm_sigma_route = spectral_norm(route);
    } else {
        out.operator_norm_sigma_route = out.operator_norm;
    }
    return out;
}

CgcAngleReport cgc_angle(const DenseMatrix& P, const DenseMatrix& R, const SvdFactorization& F) {
    const int n = F.V.rows();
    const int n_c = P.cols();
    if (n_c <= 0 || n_c >= n) throw Error(ErrorCode::TrivialProjection, "cgc_angle: Pi is 0 or the identity");

    const DenseMatrix Pi = cgc_projection(P, R, F);
    const DenseMatrix Wh = qa_power(F, 0.5);
    const DenseMatrix Whi = qa_power(F, -0.5);

    const DenseMatrix X = qr_orthonormal(matmul(Wh, P));
    const DenseMatrix ImPi = DenseMatrix::identity(n) - Pi;
    const DenseMatrix Y0 = orthonormal_range(ImPi, 0.5 / spectral_norm(ImPi));
    if (Y0.cols() != n - n_c) throw Error(ErrorCode::TrivialProjection, "cgc_angle: unexpected projector rank");
    const DenseMatrix Y = qr_orthonormal(matmul(Wh, Y0));

    const SvdFactorization Fc = svd(matmul(X.transposed(), Y));
    const double cmax = std::min(1.0, Fc.sigma.empty() ? 0.0 : Fc.sigma.back());

    CgcAngleReport rep;
    rep.theta_min = std::acos(cmax);
    rep.Pi_QA = operator_norm_weighted(Pi, Wh, Whi);
    rep.I_minus_Pi_QA = operator_norm_weighted(ImPi, Wh, Whi);
    return rep;
}

EquivalenceReport inner_product_equivalence(const DenseMatrix& P, const DenseMatrix& R,
                                            const SvdFactorization& F, const BasisDecomposition& d) {
    EquivalenceReport rep;
    const DenseMatrix A = assemble_matrix(F);
    const DenseMatrix Ac = coarse_operator(R, A, P);

    const DenseMatrix S = spd_fractional_power(matmul(Ac.transposed(), Ac), 0.5);
    const DenseMatrix T = matmul(P.transposed(), matmul(qa_power(F, 1.0), P));
    const DenseMatrix Ti = spd_fractional_power(T, -0.5);
    const SymmetricEigen eig = eigen_symmetric(matmul(Ti, matmul(S, Ti)));
    rep.c0_measured = eig.lambda.front();
    rep.c1_measured = eig.lambda.back();

    const double delta_hat_sq = std::pow(d.sigma_k, 2.0 * d.beta - 1.0) * d.Khat_P;
    rep.hyp5_ok = delta_hat_sq < 1.0;
    rep.beta_ok = d.beta >= 1.0 - 1e-12;
    const StabilityHypotheses hyp = stability_hypotheses(d);
    rep.bounds_valid = hyp.all() && rep.hyp5_ok && rep.beta_ok;

    rep.c0_bound = 0.0;
    rep.c1_bound = std::numeric_limits<double>::infinity();
    if (rep.bounds_valid) {
        const bool top_level = d.S2.empty();
        const double sKp = std::sqrt(d.Khat_P);
        const double sKr = std::sqrt(d.Khat_R);
        // P^T QA P transformed block (eq. route with D = diag(Sigma1, I)).
        const BlockBounds e2 = block_bounds(1.0, 1.0 + delta_hat_sq,
                                            top_level ? 0.0 : std::pow(d.sigma_k, d.beta) * sKp,
                                            top_level ? 0.0 : std::pow(d.sigma_k, d.beta - 1.0) * sKp, 1.0, 1.0);
        // R^T A P transformed block.
        const BlockBounds e1 = block_bounds(1.0 - d.delta_PR_sq, 1.0 + d.delta_PR_sq,
                                            top_level ? 0.0 : std::pow(d.sigma_k, d.gamma) * sKr,
                                            top_level ? 0.0 : std::pow(d.sigma_k, d.beta - 1.0) * sKp,
                                            top_level ? 1.0 : std::min(d.s1(), 1.0), 1.0);
        const double c0_tilde = e1.eta0 / e2.eta1;
        const double c1_tilde = e1.eta1 / e2.eta0;

        const SvdFactorization Fbp = svd(d.B_P);
        const SvdFactorization Fbr = svd(d.B_R);
        const double bp_max = Fbp.sigma.back(), bp_min = Fbp.sigma.front();
        const double br_max = Fbr.sigma.back(), br_min = Fbr.sigma.front();
        if (bp_min <= 0.0 || br_min <= 0.0)
            throw Error(ErrorCode::DegenerateBlock, "inner_product_equivalence: singular change of basis");
        const double f0 = (1.0 / bp_min) * br_max; // |B_P^{-1}| |B_R|
        const double f1 = bp_max * (1.0 / br_min); // |B_P| |B_R^{-1}|
        rep.c0_bound = c0_tilde / (f0 * f0);
        rep.c1_bound = c1_tilde * f1 * f1;
    }
    return rep;
}

double two_grid_bound(double C_Pi, double K_P1, int nu, double beta) {
    if (beta <= 0.5) throw Error(ErrorCode::InvalidBeta, "two_grid_bound: beta must exceed 1/2");
    const double p = 2.0 * beta - 1.0;
    const double lead = std::pow(4.0 / (4.0 + p), 2.0);
    const double decay = std::pow(p / (4.0 * nu + p), p / 2.0);
    return lead * decay * C_Pi * K_P1;
}

WcycleRequirements wcycle_requirements(double c0, double c1, double K_P1, double C_Pi, double beta) {
    if (beta <= 0.5) throw Error(ErrorCode::InvalidBeta, "wcycle_requirements: beta must exceed 1/2");
    if (!(c0 > 0.0) || c1 < c0) throw Error(ErrorCode::InvalidSpec, "wcycle_requirements: need 0 < c0 <= c1");
    WcycleRequirements out;
    const double p = 2.0 * beta - 1.0;
    const double base = 4.0 * (c1 / c0) * K_P1 * C_Pi * (2.0 * C_Pi - 1.0);
    out.nu_min_raw = (base <= 0.0) ? 0.0 : (p / 4.0) * std::pow(base, 2.0 / p);
    out.nu_min = static_cast<int>(std::ceil(out.nu_min_raw - 1e-12));
    out.C_mu = 2.0 * (c1 / c0) * K_P1 * C_Pi;
    out.C_mu_text = 2.0 * (c1 / c0) * C_Pi;
    out.rho_bound = (out.C_mu > 0.0) ? 1.0 / (2.0 * out.C_mu) : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace nsamg
