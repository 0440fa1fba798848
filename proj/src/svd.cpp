#include "nsamg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsamg {

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr int kMaxSweeps = 60;

// Gram-Schmidt completion of columns [filled..m) of U against the columns
// already present. Used for zero singular values, where the one-sided Jacobi
// column carries no direction. Deterministic: picks the canonical basis
// vector with the largest residual each time.
void complete_orthonormal(DenseMatrix& U, const std::vector<int>& missing) {
    const int m = U.rows();
    const int n = U.cols();
    std::vector<char> filled(n, 1);
    for (int s : missing) filled[s] = 0;
    for (int slot : missing) {
        Vector best;
        double best_norm = -1.0;
        for (int e = 0; e < m; ++e) {
            Vector v(m, 0.0);
            v[e] = 1.0;
            for (int j = 0; j < n; ++j) {
                if (!filled[j]) continue;
                const Vector uj = U.col(j);
                axpy(-dot(uj, v), uj, v);
            }
            const double nv = norm2(v);
            if (nv > best_norm) {
                best_norm = nv;
                best = std::move(v);
            }
        }
        for (double& x : best) x /= best_norm;
        U.set_col(slot, best);
        filled[slot] = 1;
    }
}

SvdFactorization svd_tall(const DenseMatrix& A) {
    const int m = A.rows();
    const int n = A.cols();
    // Work on transposed storage: row j of Bt / Vt is the j-th column of
    // B / V, so every sweep touches contiguous memory.
    DenseMatrix Bt = A.transposed();
    DenseMatrix Vt = DenseMatrix::identity(n);

    // Column norms are cached per sweep and updated through the rotation
    // identities; only the cross product costs a fresh pass per pair.
    Vector colsq(n, 0.0);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        for (int j = 0; j < n; ++j) {
            const double* bj = &Bt.data()[static_cast<std::size_t>(j) * m];
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += bj[i] * bj[i];
            colsq[j] = s;
        }
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double alpha = colsq[p], beta = colsq[q];
                double* bp = &Bt.data()[static_cast<std::size_t>(p) * m];
                double* bq = &Bt.data()[static_cast<std::size_t>(q) * m];
                double gamma = 0.0;
                for (int i = 0; i < m; ++i) gamma += bp[i] * bq[i];
                const double scale = std::sqrt(alpha * beta);
                if (scale == 0.0 || std::fabs(gamma) <= kJacobiTol * scale) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < m; ++i) {
                    const double xp = bp[i], xq = bq[i];
                    bp[i] = c * xp - s * xq;
                    bq[i] = s * xp + c * xq;
                }
                double* vp = &Vt.data()[static_cast<std::size_t>(p) * n];
                double* vq = &Vt.data()[static_cast<std::size_t>(q) * n];
                for (int i = 0; i < n; ++i) {
                    const double xp = vp[i], xq = vq[i];
                    vp[i] = c * xp - s * xq;
                    vq[i] = s * xp + c * xq;
                }
                colsq[p] = c * c * alpha - 2.0 * c * s * gamma + s * s * beta;
                colsq[q] = s * s * alpha + 2.0 * c * s * gamma + c * c * beta;
            }
        }
        if (!rotated) break;
    }
    const DenseMatrix B = Bt.transposed();
    const DenseMatrix V = Vt.transposed();

    Vector sigma(n);
    for (int j = 0; j < n; ++j) sigma[j] = norm2(B.col(j));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sigma[a] < sigma[b]; });

    // Columns below this are exact zeros up to roundoff; their U directions
    // come from Gram-Schmidt completion instead of normalizing noise.
    const double smax = sigma.empty() ? 0.0 : sigma[order.back()];
    const double tiny = smax * 1e-15;

    DenseMatrix U(m, n);
    DenseMatrix Vs(n, n);
    Vector ss(n);
    std::vector<int> missing;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        ss[j] = sigma[src];
        Vs.set_col(j, V.col(src));
        if (sigma[src] > tiny) {
            Vector u = B.col(src);
            for (double& x : u) x /= sigma[src];
            U.set_col(j, u);
        } else {
            ss[j] = 0.0;
            missing.push_back(j);
        }
    }
    if (!missing.empty()) complete_orthonormal(U, missing);

    // Sign convention: first nonzero entry of each V column positive.
    for (int j = 0; j < n; ++j) {
        const Vector vj = Vs.col(j);
        double colmax = 0.0;
        for (double x : vj) colmax = std::max(colmax, std::fabs(x));
        for (int i = 0; i < n; ++i) {
            if (std::fabs(vj[i]) > 1e-12 * colmax) {
                if (vj[i] < 0.0) {
                    for (int r = 0; r < n; ++r) Vs(r, j) = -Vs(r, j);
                    for (int r = 0; r < m; ++r) U(r, j) = -U(r, j);
                }
                break;
            }
        }
    }
    return SvdFactorization{std::move(U), std::move(ss), std::move(Vs)};
}

} // namespace

SvdFactorization svd(const DenseMatrix& A) {
    if (!A.all_finite()) throw Error(ErrorCode::NonFinite, "svd: input has NaN/Inf entries");
    if (A.rows() > kDenseCap || A.cols() > kDenseCap)
        throw Error(ErrorCode::TooLarge, "svd: dimension exceeds dense cap");
    if (A.rows() >= A.cols()) return svd_tall(A);
    SvdFactorization F = svd_tall(A.transposed());
    return SvdFactorization{std::move(F.V), std::move(F.sigma), std::move(F.U)};
}

double spectral_norm(const DenseMatrix& A) {
    SvdFactorization F = svd(A);
    return F.sigma.empty() ? 0.0 : F.sigma.back();
}

double spectral_norm_estimate(const DenseMatrix& A) {
    const int m = A.rows(), n = A.cols();
    if (m == 0 || n == 0) return 0.0;
    const int block = std::min(4, n);

    // deterministic pseudo-random start block
    DenseMatrix X(n, block);
    std::uint64_t state = 0x243f6a8885a308d3ULL;
    for (double& v : X.data()) {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        v = static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53 - 0.5;
    }

    auto orthonormalize = [&](DenseMatrix& M) {
        for (int j = 0; j < M.cols(); ++j) {
            Vector cj = M.col(j);
            for (int k = 0; k < j; ++k) {
                const Vector ck = M.col(k);
                axpy(-dot(ck, cj), ck, cj);
            }
            const double nrm = norm2(cj);
            if (nrm > 1e-300)
                for (double& v : cj) v /= nrm;
            M.set_col(j, cj);
        }
    };

    double prev = -1.0;
    int stagnant = 0;
    double best = 0.0;
    for (int iter = 0; iter < 400; ++iter) {
        orthonormalize(X);
        const DenseMatrix AX = matmul(A, X);
        // Rayleigh-Ritz on the block: largest eigenvalue of X^T A^T A X
        const DenseMatrix H = matmul(AX.transposed(), AX);
        const SymmetricEigen eig = eigen_symmetric(H);
        best = std::sqrt(std::max(eig.lambda.back(), 0.0));
        if (std::fabs(best - prev) <= 1e-14 * std::max(best, 1e-300)) {
            if (++stagnant >= 3) break;
        } else {
            stagnant = 0;
        }
        prev = best;
        X = matmul(A.transposed(), AX);
    }
    return best;
}

DenseMatrix polar_q(const SvdFactorization& F) {
    if (F.sigma.empty() || F.sigma.front() <= 1e-14 * F.sigma.back())
        throw Error(ErrorCode::SingularInput, "polar_q: singular input");
    return matmul(F.V, F.U.transposed());
}

SymmetricEigen eigen_symmetric(const DenseMatrix& M) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "eigen_symmetric: square input required");
    const int n = M.rows();
    DenseMatrix A = M;
    DenseMatrix E = DenseMatrix::identity(n);
    const double fro = M.frobenius_norm();
    const double stop = 1e-14 * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (std::sqrt(2.0 * off) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < n; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double eip = E(i, p), eiq = E(i, q);
                    E(i, p) = c * eip - s * eiq;
                    E(i, q) = s * eip + c * eiq;
                }
            }
        }
    }

    Vector lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = A(i, i);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
    SymmetricEigen out{Vector(n), DenseMatrix(n, n)};
    for (int j = 0; j < n; ++j) {
        out.lambda[j] = lambda[order[j]];
        out.E.set_col(j, E.col(order[j]));
    }
    return out;
}

DenseMatrix spd_fractional_power(const DenseMatrix& M, double p) {
    if (M.rows() != M.cols()) throw Error(ErrorCode::DimensionMismatch, "spd_fractional_power: square input required");
    const double scale = std::max(1.0, M.max_abs());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = i + 1; j < M.cols(); ++j)
            if (std::fabs(M(i, j) - M(j, i)) > 1e-10 * scale)
                throw Error(ErrorCode::NotSpd, "spd_fractional_power: input not symmetric");

    SymmetricEigen eig = eigen_symmetric(M);
    const double lmax = eig.lambda.empty() ? 0.0 : eig.lambda.back();
    if (!eig.lambda.empty() && eig.lambda.front() < -1e-10 * std::max(lmax, 0.0))
        throw Error(ErrorCode::NotSpd, "spd_fractional_power: negative eigenvalue");
    if (p < 0.0 && (eig.lambda.empty() || eig.lambda.front() <= 1e-14 * std::max(lmax, 1e-300)))
        throw Error(ErrorCode::NotSpd, "spd_fractional_power: singular input for negative power");

    const int n = M.rows();
    Vector powered(n);
    for (int i = 0; i < n; ++i) {
        const double l = std::max(eig.lambda[i], 0.0);
        powered[i] = (l == 0.0 && p > 0.0) ? 0.0 : std::pow(l, p);
    }
    DenseMatrix X = matmul(eig.E, matmul(DenseMatrix::diagonal(powered), eig.E.transposed()));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (X(i, j) + X(j, i));
            X(i, j) = v;
            X(j, i) = v;
        }
    return X;
}

DenseMatrix pseudo_inverse(const DenseMatrix& A, double rtol) {
    SvdFactorization F = svd(A);
    const double smax = F.sigma.empty() ? 0.0 : F.sigma.back();
    const int r = static_cast<int>(F.sigma.size());
    DenseMatrix Sp(r, r);
    for (int i = 0; i < r; ++i) Sp(i, i) = (F.sigma[i] > rtol * smax && F.sigma[i] > 0.0) ? 1.0 / F.sigma[i] : 0.0;
    return matmul(F.V, matmul(Sp, F.U.transposed()));
}

double weighted_norm(const Vector& v, const DenseMatrix& W) {
    if (W.rows() != W.cols() || static_cast<int>(v.size()) != W.rows())
        throw Error(ErrorCode::DimensionMismatch, "weighted_norm: shape mismatch");
    const double s = dot(matvec(W, v), v);
    return std::sqrt(std::max(s, 0.0));
}

double operator_norm_weighted(const DenseMatrix& M, const DenseMatrix& W) {
    DenseMatrix Wh = spd_fractional_power(W, 0.5);
    DenseMatrix Whi = spd_fractional_power(W, -0.5);
    return operator_norm_weighted(M, Wh, Whi);
}

double operator_norm_weighted(const DenseMatrix& M, const DenseMatrix& W_half, const DenseMatrix& W_half_inv) {
    if (M.rows() != M.cols() || M.rows() != W_half.rows())
        throw Error(ErrorCode::DimensionMismatch, "operator_norm_weighted: shape mismatch");
    return spectral_norm(matmul(W_half, matmul(M, W_half_inv)));
}

SvdFactorization qa_factorization(const SvdFactorization& F) { return SvdFactorization{F.V, F.sigma, F.V}; }

SvdFactorization aq_factorization(const SvdFactorization& F) { return SvdFactorization{F.U, F.sigma, F.U}; }

namespace {
DenseMatrix spectral_power(const DenseMatrix& basis, const Vector& sigma, double p) {
    const int n = static_cast<int>(sigma.size());
    Vector powered(n);
    for (int i = 0; i < n; ++i) {
        if (sigma[i] <= 0.0 && p < 0.0)
            throw Error(ErrorCode::SingularInput, "spectral power: zero singular value with negative power");
        powered[i] = (sigma[i] == 0.0 && p > 0.0) ? 0.0 : std::pow(sigma[i], p);
    }
    return matmul(basis, matmul(DenseMatrix::diagonal(powered), basis.transposed()));
}
} // namespace

DenseMatrix qa_power(const SvdFactorization& F, double p) { return spectral_power(F.V, F.sigma, p); }

DenseMatrix aq_power(const SvdFactorization& F, double p) { return spectral_power(F.U, F.sigma, p); }

} // namespace nsamg
