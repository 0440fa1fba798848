#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nsamg/problems.hpp"
#include "nsamg/transfer.hpp"

namespace nsamg {

// One level of the hierarchy. A has unit spectral norm; scale is the factor
// applied to reach that (A_raw = A / scale). The coarsest level carries no
// transfers.
struct Level {
    SparseMatrix A;
    double scale = 1.0;
    SparseMatrix R;
    SparseMatrix P;
    DenseMatrix A_coarse_raw;    // R^T A P before normalization
    double coarse_scale = 1.0;   // 1 / sigma_max(A_coarse_raw)
    bool has_transfers = false;

    const SvdFactorization& factorization() const; // lazy, cached

private:
    mutable std::shared_ptr<SvdFactorization> svd_cache_;
};

struct HierarchyConfig {
    TransferConfig transfer;
    int max_levels = 2;
    int coarsest_max = 40;
};

struct Hierarchy {
    std::vector<Level> levels;
    HierarchyConfig config;

    int coarsest_size() const { return levels.back().A.rows(); }
    std::vector<int> level_sizes() const;
};

// Per level: strength -> cf_split -> configured builders -> R^T A P ->
// normalize. Stops at coarsest_max rows or max_levels. Throws
// SingularCoarseOperator naming the offending level.
Hierarchy build_hierarchy(const ScaledSystem& system, const HierarchyConfig& config);

// nu sweeps of x <- x + A^T (b - A x); error propagation (I - A^T A)^nu for
// unit-norm A.
void richardson_normal_apply(const SparseMatrix& A, Vector& x, const Vector& b, int nu);

enum class SolveStatus { Converged, MaxIterations, Stagnated };
enum class CycleKind { TwoGrid, MuCycle };

struct SolveReport {
    std::vector<double> residual_history;  // l2 residual per iteration (incl. initial)
    std::vector<double> error_history_qa;  // QA error norm, when x_true supplied
    SolveStatus status = SolveStatus::MaxIterations;
    CycleKind cycle = CycleKind::TwoGrid;
    int nu = 0;
    int mu = 1;
    int iterations = 0;
    Vector x;
};

// Two-level cycle with exact coarse solve: pre-relax nu sweeps, then coarse
// correction through A_coarse_raw. Stagnation after 10 consecutive
// non-contracting iterations.
SolveReport two_grid_solve(const Hierarchy& h, const Vector& b, int nu, double tol, int max_iters,
                           const Vector* x_true = nullptr);

// Recursive mu-cycle (mu = 2 is the W-cycle), pre-relaxation only, direct
// solve at the coarsest level.
SolveReport mu_cycle_solve(const Hierarchy& h, const Vector& b, int nu, int mu, double tol, int max_iters,
                           const Vector* x_true = nullptr);

// Geometric mean of the last five contraction ratios of the preferred
// history (QA errors when present, l2 residuals otherwise). Requires at
// least six recorded ratios.
double measure_rho(const SolveReport& report);

} // namespace nsamg
