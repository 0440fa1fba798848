#include "nsamg/solver.hpp"

#include <cmath>
#include <string>

namespace nsamg {

const SvdFactorization& Level::factorization() const {
    if (!svd_cache_) svd_cache_ = std::make_shared<SvdFactorization>(svd(A.to_dense()));
    return *svd_cache_;
}

std::vector<int> Hierarchy::level_sizes() const {
    std::vector<int> sizes;
    for (const Level& l : levels) sizes.push_back(l.A.rows());
    return sizes;
}

Hierarchy build_hierarchy(const ScaledSystem& system, const HierarchyConfig& config) {
    Hierarchy h;
    h.config = config;

    SparseMatrix A = system.A;
    double scale = system.scale;
    for (int level = 0;; ++level) {
        Level lvl;
        lvl.A = A;
        lvl.scale = scale;
        if (A.rows() <= config.coarsest_max || level + 1 >= config.max_levels) {
            h.levels.push_back(std::move(lvl));
            break;
        }

        const SvdFactorization& F = lvl.factorization();
        TransferPair pair;
        try {
            pair = build_transfer_pair(A, &F, config.transfer);
        } catch (const Error& e) {
            throw Error(e.code(), "level " + std::to_string(level) + ": " + e.what());
        }
        if (pair.P.cols() >= A.rows())
            throw Error(ErrorCode::InvalidSpec, "level " + std::to_string(level) + ": coarsening failed to reduce size");

        const SparseMatrix Ac_sparse = multiply(pair.R.transposed(), multiply(A, pair.P));
        const DenseMatrix Ac = Ac_sparse.to_dense();
        const SvdFactorization Fc = svd(Ac);
        if (Fc.sigma.empty() || Fc.sigma.front() < 1e-12 * Fc.sigma.back())
            throw Error(ErrorCode::SingularCoarseOperator,
                        "level " + std::to_string(level) + ": coarse operator singular");

        lvl.R = pair.R;
        lvl.P = pair.P;
        lvl.A_coarse_raw = Ac;
        lvl.coarse_scale = 1.0 / Fc.sigma.back();
        lvl.has_transfers = true;
        h.levels.push_back(std::move(lvl));

        A = scale_rows(Ac_sparse, Vector(Ac_sparse.rows(), 1.0 / Fc.sigma.back()));
        scale = 1.0 / Fc.sigma.back();
    }
    return h;
}

void richardson_normal_apply(const SparseMatrix& A, Vector& x, const Vector& b, int nu) {
    for (int s = 0; s < nu; ++s) {
        Vector r = b;
        const Vector Ax = A.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ax[i];
        const Vector corr = A.apply_transposed(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    }
}

namespace {

double qa_error_norm(const Level& level, const Vector& x, const Vector& x_true) {
    const SvdFactorization& F = level.factorization();
    Vector e(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) e[i] = x[i] - x_true[i];
    const Vector y = matvec_transposed(F.V, e);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += F.sigma[i] * y[i] * y[i];
    return std::sqrt(std::max(s, 0.0));
}

struct CoarseSolver {
    explicit CoarseSolver(const SparseMatrix& A) : lu(A.to_dense()) {
        if (lu.singular()) throw Error(ErrorCode::SingularCoarseOperator, "coarsest level singular");
    }
    LuFactorization lu;
};

class MuCycle {
public:
    MuCycle(const Hierarchy& h, int nu, int mu) : h_(h), nu_(nu), mu_(mu), coarsest_(h.levels.back().A) {}

    void cycle(std::size_t level, const Vector& b, Vector& x) const {
        const Level& lvl = h_.levels[level];
        if (!lvl.has_transfers) {
            x = coarsest_.lu.solve(b);
            return;
        }
        richardson_normal_apply(lvl.A, x, b, nu_);
        Vector r = b;
        const Vector Ax = lvl.A.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ax[i];
        Vector rc = lvl.R.apply_transposed(r);
        // A_coarse_raw e = rc  <=>  A_{l+1} e = coarse_scale * rc
        for (double& v : rc) v *= lvl.coarse_scale;
        Vector ec(rc.size(), 0.0);
        for (int pass = 0; pass < mu_; ++pass) cycle(level + 1, rc, ec);
        const Vector corr = lvl.P.apply(ec);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    }

private:
    const Hierarchy& h_;
    int nu_;
    int mu_;
    CoarseSolver coarsest_;
};

SolveReport run_iteration(const Hierarchy& h, const Vector& b, int nu, int mu, double tol, int max_iters,
                          const Vector* x_true, CycleKind kind) {
    if (h.levels.size() < 2)
        throw Error(ErrorCode::InvalidSpec, "solve requires a hierarchy with at least 2 levels");
    const Level& fine = h.levels.front();

    SolveReport rep;
    rep.cycle = kind;
    rep.nu = nu;
    rep.mu = mu;
    rep.x.assign(b.size(), 0.0);

    const double bnorm = norm2(b);
    const MuCycle cyc(h, nu, mu);

    auto residual = [&](const Vector& x) {
        Vector r = b;
        const Vector Ax = fine.A.apply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ax[i];
        return norm2(r);
    };

    // QA histories need the fine-level factorization; above the dense cap we
    // still solve, just without the QA diagnostics.
    const bool track_qa = x_true != nullptr && fine.A.rows() <= kDenseCap;

    rep.residual_history.push_back(residual(rep.x));
    if (track_qa) rep.error_history_qa.push_back(qa_error_norm(fine, rep.x, *x_true));

    std::unique_ptr<LuFactorization> two_grid_lu;
    if (kind == CycleKind::TwoGrid) {
        two_grid_lu = std::make_unique<LuFactorization>(fine.A_coarse_raw);
        if (two_grid_lu->singular())
            throw Error(ErrorCode::SingularCoarseOperator, "two_grid_solve: coarse singular");
    }

    int flat = 0;
    for (int it = 0; it < max_iters; ++it) {
        if (kind == CycleKind::TwoGrid) {
            richardson_normal_apply(fine.A, rep.x, b, nu);
            Vector r = b;
            const Vector Ax = fine.A.apply(rep.x);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ax[i];
            const Vector ec = two_grid_lu->solve(fine.R.apply_transposed(r));
            const Vector corr = fine.P.apply(ec);
            for (std::size_t i = 0; i < rep.x.size(); ++i) rep.x[i] += corr[i];
        } else {
            cyc.cycle(0, b, rep.x);
        }
        ++rep.iterations;
        const double res = residual(rep.x);
        rep.residual_history.push_back(res);
        if (track_qa) rep.error_history_qa.push_back(qa_error_norm(fine, rep.x, *x_true));

        if (res <= tol * bnorm) {
            rep.status = SolveStatus::Converged;
            return rep;
        }
        const std::size_t m = rep.residual_history.size();
        const double prev = rep.residual_history[m - 2];
        flat = (prev > 0.0 && res >= prev) ? flat + 1 : 0;
        if (flat >= 10) {
            rep.status = SolveStatus::Stagnated;
            return rep;
        }
    }
    rep.status = SolveStatus::MaxIterations;
    return rep;
}

} // namespace

SolveReport two_grid_solve(const Hierarchy& h, const Vector& b, int nu, double tol, int max_iters,
                           const Vector* x_true) {
    return run_iteration(h, b, nu, 1, tol, max_iters, x_true, CycleKind::TwoGrid);
}

SolveReport mu_cycle_solve(const Hierarchy& h, const Vector& b, int nu, int mu, double tol, int max_iters,
                           const Vector* x_true) {
    if (mu < 1) throw Error(ErrorCode::InvalidSpec, "mu must be >= 1");
    return run_iteration(h, b, nu, mu, tol, max_iters, x_true, CycleKind::MuCycle);
}

double measure_rho(const SolveReport& report) {
    const std::vector<double>& hist =
        report.error_history_qa.size() >= 2 ? report.error_history_qa : report.residual_history;
    std::vector<double> ratios;
    for (std::size_t i = 1; i < hist.size(); ++i)
        if (hist[i - 1] > 0.0) ratios.push_back(hist[i] / hist[i - 1]);
    if (ratios.size() < 6)
        throw Error(ErrorCode::TooFewIterations, "measure_rho requires at least 6 recorded ratios");
    double prod = 1.0;
    for (std::size_t i = ratios.size() - 5; i < ratios.size(); ++i) prod *= ratios[i];
    return std::pow(prod, 0.2);
}

} // namespace nsamg
