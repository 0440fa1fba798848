#pragma once

#include <cstdint>

#include "nsamg/sparse.hpp"
#include "nsamg/svd.hpp"

namespace nsamg {

enum class Discretization { UpwindFv, Supg };

// Steady advection b = (cos(theta), sin(theta)) on the unit square, inflow on
// the south and west boundaries. n is cells per side, h = 1/n.
struct ProblemSpec {
    Discretization disc = Discretization::UpwindFv;
    int n = 8;
    double theta = 3.0 * 3.14159265358979323846 / 16.0;
    double tau = 1.0; // SUPG stabilization multiplier
    std::uint64_t seed = 0;

    void validate() const;
};

struct ScaledSystem {
    SparseMatrix A;
    double scale = 1.0; // the applied 1/sigma_max factor
    bool diag_applied = false;
};

// First-order upwind finite volume, one unknown per cell, lexicographic
// ordering (i + n*j). Inflow fluxes are folded into the right-hand side; the
// matrix keeps interior couplings only.
SparseMatrix gen_upwind_advection(const ProblemSpec& spec);

// Right-hand side for source q = 0 and inflow value g (upwind FV).
Vector upwind_inflow_rhs(const ProblemSpec& spec, double g);

// P1 SUPG on a structured right-triangulation ((n+1)^2 nodes, each cell split
// along its lower-left/upper-right diagonal). Inflow Dirichlet nodes are
// eliminated; remaining unknowns keep lexicographic node order.
// tau_K = tau * h / (2 |b|).
SparseMatrix gen_supg_advection(const ProblemSpec& spec);
Vector supg_inflow_rhs(const ProblemSpec& spec, double g);

// D^{-1} A with D = diag(A), pointwise. Throws ZeroDiagonal.
SparseMatrix diagonal_scale(const SparseMatrix& A);

// A / sigma_max with sigma_max from a dense SVD. Throws TooLarge beyond the
// dense cap.
ScaledSystem normalize_spectral(const SparseMatrix& A, bool diag_applied = false);

} // namespace nsamg
