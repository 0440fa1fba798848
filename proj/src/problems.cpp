#include "nsamg/problems.hpp"

#include <cmath>

namespace nsamg {

namespace {
constexpr double kHalfPi = 1.57079632679489661923;
} // namespace

void ProblemSpec::validate() const {
    if (n < 2) throw Error(ErrorCode::InvalidSpec, "n must be >= 2");
    if (!(theta > 0.0) || !(theta < kHalfPi))
        throw Error(ErrorCode::InvalidSpec, "theta must lie in (0, pi/2)");
    if (disc == Discretization::Supg && !(tau > 0.0))
        throw Error(ErrorCode::InvalidSpec, "tau must be positive");
}

SparseMatrix gen_upwind_advection(const ProblemSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const double h = 1.0 / n;
    const double cw = std::cos(spec.theta) / h; // west flux coefficient
    const double cs = std::sin(spec.theta) / h; // south flux coefficient

    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int row = i + n * j;
            ti.push_back(row);
            tj.push_back(row);
            tv.push_back(cw + cs);
            if (i > 0) {
                ti.push_back(row);
                tj.push_back(row - 1);
                tv.push_back(-cw);
            }
            if (j > 0) {
                ti.push_back(row);
                tj.push_back(row - n);
                tv.push_back(-cs);
            }
        }
    return SparseMatrix::from_triplets(n * n, n * n, ti, tj, tv);
}

Vector upwind_inflow_rhs(const ProblemSpec& spec, double g) {
    spec.validate();
    const int n = spec.n;
    const double h = 1.0 / n;
    const double cw = std::cos(spec.theta) / h;
    const double cs = std::sin(spec.theta) / h;
    Vector b(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int row = i + n * j;
            if (i == 0) b[row] += cw * g;
            if (j == 0) b[row] += cs * g;
        }
    return b;
}

namespace {

struct SupgMesh {
    int n;                        // cells per side
    int m;                        // nodes per side = n + 1
    std::vector<int> unknown_of;  // node -> unknown index or -1 (inflow)
    std::vector<int> node_of;     // unknown -> node
};

SupgMesh supg_mesh(int n) {
    SupgMesh mesh;
    mesh.n = n;
    mesh.m = n + 1;
    mesh.unknown_of.assign(static_cast<std::size_t>(mesh.m) * mesh.m, -1);
    for (int j = 0; j < mesh.m; ++j)
        for (int i = 0; i < mesh.m; ++i) {
            const int node = i + mesh.m * j;
            if (i == 0 || j == 0) continue; // inflow Dirichlet (x=0 or y=0)
            mesh.unknown_of[node] = static_cast<int>(mesh.node_of.size());
            mesh.node_of.push_back(node);
        }
    return mesh;
}

// Element contribution of one P1 triangle: Galerkin advection plus the SUPG
// streamline term, accumulated into triplets over all (n+1)^2 nodes.
void assemble_triangle(const double px[3], const double py[3], const int nodes[3], double bx, double by,
                       double tau_k, std::vector<int>& ti, std::vector<int>& tj, std::vector<double>& tv) {
    const double two_area = (px[1] - px[0]) * (py[2] - py[0]) - (px[2] - px[0]) * (py[1] - py[0]);
    const double area = 0.5 * two_area;
    double gx[3], gy[3];
    for (int k = 0; k < 3; ++k) {
        const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
        gx[k] = (py[k1] - py[k2]) / two_area;
        gy[k] = (px[k2] - px[k1]) / two_area;
    }
    double bg[3];
    for (int k = 0; k < 3; ++k) bg[k] = bx * gx[k] + by * gy[k];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const double galerkin = bg[c] * area / 3.0;
            const double supg = tau_k * bg[c] * bg[r] * area;
            ti.push_back(nodes[r]);
            tj.push_back(nodes[c]);
            tv.push_back(galerkin + supg);
        }
}

// Full (n+1)^2 x (n+1)^2 SUPG operator before boundary elimination.
SparseMatrix supg_full_operator(const ProblemSpec& spec) {
    const int n = spec.n;
    const int m = n + 1;
    const double h = 1.0 / n;
    const double bx = std::cos(spec.theta);
    const double by = std::sin(spec.theta);
    const double tau_k = spec.tau * h / 2.0; // |b| = 1

    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int ll = i + m * j;
            const int lr = ll + 1;
            const int ul = ll + m;
            const int ur = ul + 1;
            const double x0 = i * h, y0 = j * h;
            {
                const double px[3] = {x0, x0 + h, x0 + h};
                const double py[3] = {y0, y0, y0 + h};
                const int nodes[3] = {ll, lr, ur};
                assemble_triangle(px, py, nodes, bx, by, tau_k, ti, tj, tv);
            }
            {
                const double px[3] = {x0, x0 + h, x0};
                const double py[3] = {y0, y0 + h, y0 + h};
                const int nodes[3] = {ll, ur, ul};
                assemble_triangle(px, py, nodes, bx, by, tau_k, ti, tj, tv);
            }
        }
    return SparseMatrix::from_triplets(m * m, m * m, ti, tj, tv);
}

} // namespace

SparseMatrix gen_supg_advection(const ProblemSpec& spec) {
    if (spec.n < 2) throw Error(ErrorCode::InvalidSpec, "n must be >= 2");
    if (!(spec.theta > 0.0) || !(spec.theta < kHalfPi))
        throw Error(ErrorCode::InvalidSpec, "theta must lie in (0, pi/2)");
    if (spec.tau < 0.0) throw Error(ErrorCode::InvalidSpec, "tau must be nonnegative");
    const SparseMatrix full = supg_full_operator(spec);
    const SupgMesh mesh = supg_mesh(spec.n);
    const int nu = static_cast<int>(mesh.node_of.size());

    std::vector<int> ti, tj;
    std::vector<double> tv;
    for (int r = 0; r < nu; ++r) {
        const int node = mesh.node_of[r];
        for (int k = full.row_ptr()[node]; k < full.row_ptr()[node + 1]; ++k) {
            const int cu = mesh.unknown_of[full.col_idx()[k]];
            if (cu < 0) continue;
            ti.push_back(r);
            tj.push_back(cu);
            tv.push_back(full.values()[k]);
        }
    }
    return SparseMatrix::from_triplets(nu, nu, ti, tj, tv);
}

Vector supg_inflow_rhs(const ProblemSpec& spec, double g) {
    const SparseMatrix full = supg_full_operator(spec);
    const SupgMesh mesh = supg_mesh(spec.n);
    const int nu = static_cast<int>(mesh.node_of.size());
    Vector b(nu, 0.0);
    for (int r = 0; r < nu; ++r) {
        const int node = mesh.node_of[r];
        for (int k = full.row_ptr()[node]; k < full.row_ptr()[node + 1]; ++k)
            if (mesh.unknown_of[full.col_idx()[k]] < 0) b[r] -= full.values()[k] * g;
    }
    return b;
}

SparseMatrix diagonal_scale(const SparseMatrix& A) {
    const Vector d = A.diagonal();
    Vector inv(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0)
            throw Error(ErrorCode::ZeroDiagonal, "zero diagonal at index " + std::to_string(i));
        inv[i] = 1.0 / d[i];
    }
    return scale_rows(A, inv);
}

ScaledSystem normalize_spectral(const SparseMatrix& A, bool diag_applied) {
    if (A.rows() > kDenseCap || A.cols() > kDenseCap)
        throw Error(ErrorCode::TooLarge, "normalize_spectral: dimension exceeds dense cap");
    if (A.nnz() == 0) throw Error(ErrorCode::SingularInput, "normalize_spectral: zero matrix");
    const double smax = spectral_norm(A.to_dense());
    if (smax <= 0.0) throw Error(ErrorCode::SingularInput, "normalize_spectral: zero spectral norm");
    const double scale = 1.0 / smax;
    SparseMatrix B = scale_rows(A, Vector(A.rows(), scale));
    return ScaledSystem{std::move(B), scale, diag_applied};
}

} // namespace nsamg
