#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsamg/report.hpp"

namespace {

using nsamg::RunConfig;

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& disc, std::string& interp,
                        std::string& restrict_op) {
    cmd->add_option("--disc", disc, "Discretization: upwind|supg")->check(CLI::IsMember({"upwind", "supg"}));
    cmd->add_option("--n", cfg.problem.n, "Cells per side");
    cmd->add_option("--theta", cfg.problem.theta, "Advection angle in radians, in (0, pi/2)");
    cmd->add_option("--tau", cfg.problem.tau, "SUPG stabilization multiplier");
    cmd->add_option("--matrix", cfg.matrix_path, "Read a MatrixMarket file instead of generating");
    cmd->add_option("--interp", interp, "Interpolation builder: classical|laip|svd|counterexample")
        ->check(CLI::IsMember({"classical", "laip", "svd", "counterexample"}));
    cmd->add_option("--restrict", restrict_op, "Restriction builder: classical_t|lair|qstar|svd|counterexample")
        ->check(CLI::IsMember({"classical_t", "lair", "qstar", "svd", "counterexample"}));
    cmd->add_option("--beta", cfg.beta, "FAP power for P");
    cmd->add_option("--gamma", cfg.gamma, "FAP power for R");
    cmd->add_option("--nu", cfg.nu, "Pre-relaxation sweeps (-1: use the W-cycle requirement)");
    cmd->add_option("--mu", cfg.mu, "Recursive coarse solves per level (2 = W-cycle)");
    cmd->add_option("--levels", cfg.levels, "Maximum hierarchy depth");
    cmd->add_option("--theta-s", cfg.transfer.theta_s, "Strength-of-connection threshold");
    cmd->add_option("--degree", cfg.transfer.degree, "lAIR/lAIP neighborhood degree")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    std::string formats;
    cmd->add_option_function<std::string>(
        "--formats",
        [&cfg](const std::string& value) {
            cfg.formats.csv = value.find("csv") != std::string::npos;
            cfg.formats.json = value.find("json") != std::string::npos;
            cfg.formats.svg = value.find("svg") != std::string::npos;
        },
        "Comma-separated subset of csv,json,svg (default: all)");
    cmd->set_config("--config", "", "key=value config file; command-line flags take precedence");
}

void finalize_config(RunConfig& cfg, const std::string& disc, const std::string& interp,
                     const std::string& restrict_op) {
    cfg.problem.disc = (disc == "supg") ? nsamg::Discretization::Supg : nsamg::Discretization::UpwindFv;
    if (interp == "classical") cfg.transfer.interp = nsamg::InterpKind::Classical;
    else if (interp == "laip") cfg.transfer.interp = nsamg::InterpKind::Laip;
    else if (interp == "svd") cfg.transfer.interp = nsamg::InterpKind::Svd;
    else if (interp == "counterexample") cfg.transfer.interp = nsamg::InterpKind::Counterexample;
    if (restrict_op == "classical_t") cfg.transfer.restrict_op = nsamg::RestrictKind::ClassicalT;
    else if (restrict_op == "lair") cfg.transfer.restrict_op = nsamg::RestrictKind::Lair;
    else if (restrict_op == "qstar") cfg.transfer.restrict_op = nsamg::RestrictKind::Qstar;
    else if (restrict_op == "svd") cfg.transfer.restrict_op = nsamg::RestrictKind::Svd;
    else if (restrict_op == "counterexample") cfg.transfer.restrict_op = nsamg::RestrictKind::Counterexample;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsamg: nonsymmetric AMG laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string disc = "upwind", interp = "classical", restrict_op = "lair";

    CLI::App* generate = app.add_subcommand("generate", "Discretize and write matrix.mtx");
    CLI::App* analyze = app.add_subcommand("analyze", "FAP constants, projection norms, theory summary");
    CLI::App* solve = app.add_subcommand("solve", "Run a two-grid or mu-cycle solve");
    CLI::App* sweep = app.add_subcommand("sweep", "Repeat the analysis over a list of n values");
    for (CLI::App* cmd : {generate, analyze, solve, sweep}) add_common_options(cmd, cfg, disc, interp, restrict_op);
    std::vector<int> ns;
    sweep->add_option("--ns", ns, "List of n values, e.g. --ns 8 12 16")->expected(-1);

    CLI::App* block = app.add_subcommand("block-bound", "Block-matrix eta bounds calculator / fuzzer");
    nsamg::BlockBoundArgs bargs;
    block->add_option("a0", bargs.a0, "lower bound on |A x|");
    block->add_option("a1", bargs.a1, "upper bound on |A x|");
    block->add_option("b", bargs.b, "upper bound on |B x|");
    block->add_option("c", bargs.c, "upper bound on |C x|");
    block->add_option("d0", bargs.d0, "lower bound on |D x|");
    block->add_option("d1", bargs.d1, "upper bound on |D x|");
    block->add_option("--fuzz", bargs.fuzz, "Sample this many scalar quadruples instead");
    block->add_option("--seed", bargs.seed, "Fuzz seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : nsamg::kExitConfig;
    }

    finalize_config(cfg, disc, interp, restrict_op);
    cfg.sweep_ns = ns;

    try {
        if (block->parsed()) {
            std::string out;
            const int rc = nsamg::run_block_bound(bargs, out);
            std::fputs(out.c_str(), stdout);
            return rc;
        }
        if (generate->parsed()) return nsamg::run_generate(cfg);
        if (analyze->parsed()) {
            cfg.command = nsamg::Command::Analyze;
            return nsamg::run_analyze(cfg);
        }
        if (solve->parsed()) {
            cfg.command = nsamg::Command::Solve;
            return nsamg::run_solve(cfg);
        }
        if (sweep->parsed()) {
            cfg.command = nsamg::Command::Sweep;
            return nsamg::run_sweep(cfg);
        }
    } catch (const nsamg::Error& e) {
        std::cerr << "error [" << nsamg::error_code_name(e.code()) << "]: " << e.what() << "\n";
        switch (e.code()) {
            case nsamg::ErrorCode::ConfigError:
            case nsamg::ErrorCode::InvalidSpec:
            case nsamg::ErrorCode::ParseError:
            case nsamg::ErrorCode::UnsupportedField:
            case nsamg::ErrorCode::InvalidBeta:
                return nsamg::kExitConfig;
            case nsamg::ErrorCode::Stagnation:
                return nsamg::kExitStagnation;
            default:
                return nsamg::kExitNumerical;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nsamg::kExitNumerical;
    }
    return 0;
}
