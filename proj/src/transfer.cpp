#include "nsamg/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nsamg {

SparseMatrix strength_graph(const SparseMatrix& A, double theta_s) {
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "strength_graph: square input required");
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int i = 0; i < A.rows(); ++i) {
        double strongest = 0.0;
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
            if (A.col_idx()[k] == i) continue;
            strongest = std::max(strongest, -A.values()[k]);
        }
        if (strongest <= 0.0) continue;
        const double cut = theta_s * strongest;
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
            const int j = A.col_idx()[k];
            if (j == i) continue;
            if (-A.values()[k] >= cut) {
                ti.push_back(i);
                tj.push_back(j);
                tv.push_back(1.0);
            }
        }
    }
    return SparseMatrix::from_triplets(A.rows(), A.cols(), ti, tj, tv);
}

CfSplit cf_split(const SparseMatrix& S) {
    if (S.rows() != S.cols()) throw Error(ErrorCode::DimensionMismatch, "cf_split: square input required");
    const int n = S.rows();
    const SparseMatrix St = S.transposed(); // row i of St: points that depend on i

    std::vector<int> measure(n, 0);
    for (int i = 0; i < n; ++i) measure[i] = St.row_ptr()[i + 1] - St.row_ptr()[i];

    enum : char { kUnassigned = 0, kC = 'C', kF = 'F' };
    std::vector<char> state(n, kUnassigned);
    int assigned = 0;
    while (assigned < n) {
        int pick = -1, best = -1;
        for (int i = 0; i < n; ++i)
            if (state[i] == kUnassigned && measure[i] > best) {
                best = measure[i];
                pick = i;
            }
        state[pick] = kC;
        ++assigned;
        for (int k = St.row_ptr()[pick]; k < St.row_ptr()[pick + 1]; ++k) {
            const int j = St.col_idx()[k];
            if (state[j] != kUnassigned) continue;
            state[j] = kF;
            ++assigned;
            for (int k2 = S.row_ptr()[j]; k2 < S.row_ptr()[j + 1]; ++k2) {
                const int dep = S.col_idx()[k2];
                if (state[dep] == kUnassigned) ++measure[dep];
            }
        }
    }

    // Repair sweep: any F point without a strong C neighbor becomes C.
    for (int i = 0; i < n; ++i) {
        if (state[i] != kF) continue;
        bool has_c = false;
        for (int k = S.row_ptr()[i]; k < S.row_ptr()[i + 1]; ++k)
            if (state[S.col_idx()[k]] == kC) has_c = true;
        if (!has_c) state[i] = kC;
    }

    CfSplit cf;
    cf.labels.assign(state.begin(), state.end());
    cf.coarse_index.assign(n, -1);
    for (int i = 0; i < n; ++i)
        if (state[i] == kC) cf.coarse_index[i] = cf.n_coarse++;
    return cf;
}

SparseMatrix classical_interp(const SparseMatrix& A, const SparseMatrix& S, const CfSplit& cf) {
    const int n = A.rows();
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int i = 0; i < n; ++i) {
        if (cf.is_coarse(i)) {
            ti.push_back(i);
            tj.push_back(cf.coarse_index[i]);
            tv.push_back(1.0);
            continue;
        }
        std::vector<int> coarse_nbrs, strong_f;
        double diag = 0.0;
        double weak_sum = 0.0;
        for (int k = A.row_ptr()[i]; k < A.row_ptr()[i + 1]; ++k) {
            const int j = A.col_idx()[k];
            const double aij = A.values()[k];
            if (j == i) {
                diag = aij;
                continue;
            }
            if (S.at(i, j) != 0.0) {
                if (cf.is_coarse(j))
                    coarse_nbrs.push_back(j);
                else
                    strong_f.push_back(j);
            } else {
                weak_sum += aij;
            }
        }

        std::vector<double> numerator(coarse_nbrs.size());
        for (std::size_t c = 0; c < coarse_nbrs.size(); ++c) numerator[c] = A.at(i, coarse_nbrs[c]);
        double denom = diag + weak_sum;
        for (int f : strong_f) {
            double csum = 0.0, cscale = 0.0;
            for (int j : coarse_nbrs) {
                const double afj = A.at(f, j);
                csum += afj;
                cscale = std::max(cscale, std::fabs(afj));
            }
            const double aif = A.at(i, f);
            if (std::fabs(csum) <= 1e-14 * cscale || cscale == 0.0) {
                denom += aif; // no coupling into the interpolatory set: lump
                continue;
            }
            for (std::size_t c = 0; c < coarse_nbrs.size(); ++c)
                numerator[c] += aif * A.at(f, coarse_nbrs[c]) / csum;
        }
        if (std::fabs(denom) < 1e-14)
            throw Error(ErrorCode::SingularRow, "classical_interp: zero denominator at row " + std::to_string(i));
        for (std::size_t c = 0; c < coarse_nbrs.size(); ++c) {
            const double w = -numerator[c] / denom;
            if (w != 0.0) {
                ti.push_back(i);
                tj.push_back(cf.coarse_index[coarse_nbrs[c]]);
                tv.push_back(w);
            }
        }
    }
    return SparseMatrix::from_triplets(n, cf.n_coarse, ti, tj, tv);
}

namespace {

std::vector<int> lair_neighborhood(const SparseMatrix& S, const CfSplit& cf, int c, int degree) {
    std::set<int> nbr;
    for (int k = S.row_ptr()[c]; k < S.row_ptr()[c + 1]; ++k) {
        const int f = S.col_idx()[k];
        if (!cf.is_coarse(f)) nbr.insert(f);
    }
    if (degree >= 2) {
        std::vector<int> first(nbr.begin(), nbr.end());
        for (int f : first)
            for (int k = S.row_ptr()[f]; k < S.row_ptr()[f + 1]; ++k) {
                const int f2 = S.col_idx()[k];
                if (!cf.is_coarse(f2)) nbr.insert(f2);
            }
    }
    return std::vector<int>(nbr.begin(), nbr.end());
}

} // namespace

SparseMatrix lair_restrict(const SparseMatrix& A, const SparseMatrix& S, const CfSplit& cf, int degree) {
    const int n = A.rows();
    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int c = 0; c < n; ++c) {
        if (!cf.is_coarse(c)) continue;
        const int jc = cf.coarse_index[c];
        ti.push_back(c);
        tj.push_back(jc);
        tv.push_back(1.0);

        const std::vector<int> nbr = lair_neighborhood(S, cf, c, degree);
        const int m = static_cast<int>(nbr.size());
        if (m == 0) continue;

        // Solve sum_f r_f a_{f f'} = -a_{c f'} over the neighborhood.
        DenseMatrix M(m, m);
        Vector rhs(m);
        for (int r = 0; r < m; ++r) {
            rhs[r] = -A.at(c, nbr[r]);
            for (int cidx = 0; cidx < m; ++cidx) M(r, cidx) = A.at(nbr[cidx], nbr[r]);
        }
        Vector r;
        LuFactorization lu(M);
        if (!lu.singular()) {
            r = lu.solve(rhs);
        } else {
            r = matvec(pseudo_inverse(M), rhs);
        }
        for (int idx = 0; idx < m; ++idx)
            if (r[idx] != 0.0) {
                ti.push_back(nbr[idx]);
                tj.push_back(jc);
                tv.push_back(r[idx]);
            }
    }
    return SparseMatrix::from_triplets(n, cf.n_coarse, ti, tj, tv);
}

SparseMatrix laip_interp(const SparseMatrix& A, const CfSplit& cf, int degree, double theta_s) {
    const SparseMatrix At = A.transposed();
    const SparseMatrix St = strength_graph(At, theta_s);
    return lair_restrict(At, St, cf, degree);
}

DenseMatrix svd_transfer(const SvdFactorization& F, int n_c, SingularVectorSide side) {
    const DenseMatrix& B = (side == SingularVectorSide::Right) ? F.V : F.U;
    if (n_c > B.cols()) throw Error(ErrorCode::DimensionMismatch, "svd_transfer: n_c exceeds dimension");
    return B.block(0, 0, B.rows(), n_c);
}

DenseMatrix q_pair_restrict(const DenseMatrix& P, const DenseMatrix& Q) {
    if (Q.rows() != P.rows() || Q.cols() != P.rows())
        throw Error(ErrorCode::DimensionMismatch, "q_pair_restrict: shape mismatch");
    return matmul(Q.transposed(), P);
}

DenseTransferPair counterexample_pair(const SvdFactorization& F, int n_c, int ell) {
    const int n = F.V.rows();
    if (!(ell >= 0 && ell < n_c && n_c < n))
        throw Error(ErrorCode::DimensionMismatch, "counterexample_pair: need 0 <= ell < n_c < n");
    DenseMatrix P(n, n_c);
    int col = 0;
    for (int j = 0; j <= n_c; ++j) {
        if (j == ell) continue;
        P.set_col(col++, F.V.col(j));
    }
    DenseMatrix R = F.U.block(0, 0, n, n_c);
    return DenseTransferPair{std::move(R), std::move(P)};
}

DenseMatrix coarse_operator(const DenseMatrix& R, const DenseMatrix& A, const DenseMatrix& P) {
    if (R.rows() != A.rows() || A.cols() != P.rows() || R.cols() != P.cols())
        throw Error(ErrorCode::DimensionMismatch, "coarse_operator: shape mismatch");
    DenseMatrix Ac = matmul(R.transposed(), matmul(A, P));
    const SvdFactorization F = svd(Ac);
    if (F.sigma.empty() || F.sigma.front() < 1e-12 * F.sigma.back())
        throw Error(ErrorCode::SingularCoarseOperator, "coarse operator is numerically singular");
    return Ac;
}

const char* interp_name(InterpKind k) {
    switch (k) {
        case InterpKind::Classical: return "classical";
        case InterpKind::Laip: return "laip";
        case InterpKind::Svd: return "svd";
        case InterpKind::Counterexample: return "counterexample";
    }
    return "?";
}

const char* restrict_name(RestrictKind k) {
    switch (k) {
        case RestrictKind::ClassicalT: return "classical_t";
        case RestrictKind::Lair: return "lair";
        case RestrictKind::Qstar: return "qstar";
        case RestrictKind::Svd: return "svd";
        case RestrictKind::Counterexample: return "counterexample";
    }
    return "?";
}

TransferPair build_transfer_pair(const SparseMatrix& A, const SvdFactorization* F, const TransferConfig& config) {
    const SparseMatrix S = strength_graph(A, config.theta_s);
    const CfSplit cf = cf_split(S);
    const int n_c = cf.n_coarse;

    const bool needs_svd = config.interp == InterpKind::Svd || config.interp == InterpKind::Counterexample ||
                           config.restrict_op == RestrictKind::Qstar || config.restrict_op == RestrictKind::Svd ||
                           config.restrict_op == RestrictKind::Counterexample;
    if (needs_svd && F == nullptr)
        throw Error(ErrorCode::InvalidSpec, "build_transfer_pair: this builder combination requires the SVD of A");

    TransferPair pair;
    pair.builder_P = interp_name(config.interp);
    pair.builder_R = restrict_name(config.restrict_op);

    if (config.interp == InterpKind::Counterexample || config.restrict_op == RestrictKind::Counterexample) {
        DenseTransferPair dp = counterexample_pair(*F, std::min(n_c, A.rows() - 1), 0);
        pair.P = SparseMatrix::from_dense(dp.P);
        pair.R = SparseMatrix::from_dense(dp.R);
        pair.builder_P = interp_name(InterpKind::Counterexample);
        pair.builder_R = restrict_name(RestrictKind::Counterexample);
        return pair;
    }

    switch (config.interp) {
        case InterpKind::Classical:
            pair.P = classical_interp(A, S, cf);
            break;
        case InterpKind::Laip:
            pair.P = laip_interp(A, cf, config.degree, config.theta_s);
            break;
        case InterpKind::Svd:
            pair.P = SparseMatrix::from_dense(svd_transfer(*F, n_c, SingularVectorSide::Right));
            break;
        case InterpKind::Counterexample:
            break; // handled above
    }

    switch (config.restrict_op) {
        case RestrictKind::ClassicalT:
            pair.R = classical_interp(A, S, cf);
            break;
        case RestrictKind::Lair:
            pair.R = lair_restrict(A, S, cf, config.degree);
            break;
        case RestrictKind::Qstar: {
            const DenseMatrix Q = polar_q(*F);
            pair.R = SparseMatrix::from_dense(q_pair_restrict(pair.P.to_dense(), Q));
            break;
        }
        case RestrictKind::Svd:
            pair.R = SparseMatrix::from_dense(svd_transfer(*F, n_c, SingularVectorSide::Left));
            break;
        case RestrictKind::Counterexample:
            break; // handled above
    }
    return pair;
}

bool full_column_rank(const SparseMatrix& M, double tol) {
    const SvdFactorization F = svd(M.to_dense());
    return !F.sigma.empty() && F.sigma.front() > tol;
}

} // namespace nsamg
