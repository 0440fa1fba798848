#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsamg/problems.hpp"
#include "nsamg/solver.hpp"
#include "nsamg/theory.hpp"

namespace nsamg {

enum class Command { Generate, Analyze, Solve, Sweep, BlockBound };

struct OutputFormats {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

struct RunConfig {
    Command command = Command::Analyze;
    ProblemSpec problem;
    std::string matrix_path; // non-empty: read MatrixMarket instead of generating
    TransferConfig transfer;
    double beta = 1.0;
    double gamma = 1.0;
    int nu = -1; // -1: use nu_min from the W-cycle requirement
    int mu = 2;
    int levels = 2;
    int coarsest_max = 40;
    double tol = 1e-10;
    int max_iters = 200;
    std::string out_dir = ".";
    OutputFormats formats;
    std::uint64_t seed = 0;
    std::vector<int> sweep_ns; // sweep: list of n values
};

// Exit codes shared by the CLI and the run_* drivers.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitStagnation = 4;

int run_generate(const RunConfig& config);
int run_analyze(const RunConfig& config);
int run_solve(const RunConfig& config);
int run_sweep(const RunConfig& config);

struct BlockBoundArgs {
    double a0 = 0.0, a1 = 0.0, b = 0.0, c = 0.0, d0 = 0.0, d1 = 0.0;
    int fuzz = 0; // > 0: fuzz mode with this many samples
    std::uint64_t seed = 0;
};
// Prints the eta table (or fuzz violation counts) to `out`; returns exit code.
int run_block_bound(const BlockBoundArgs& args, std::string& out);

// The analyze pipeline shared by analyze/sweep: discretize (or read), scale
// by the diagonal, normalize, factorize, and build the configured transfers.
struct AnalysisSetup {
    ScaledSystem system;
    SvdFactorization F;
    DenseMatrix P;
    DenseMatrix R;
    TransferPair pair;
};
AnalysisSetup prepare_analysis(const RunConfig& config);

} // namespace nsamg
