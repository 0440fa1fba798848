#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nsamg/report.hpp"
#include "nsamg/theory.hpp"
#include "oracles.hpp"

using namespace nsamg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.back() == ',') fields.push_back("");
        rows.push_back(fields);
    }
    return rows;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunConfig base_config(const fs::path& out) {
    RunConfig cfg;
    cfg.problem.n = 8;
    cfg.transfer.interp = InterpKind::Classical;
    cfg.transfer.restrict_op = RestrictKind::Lair;
    cfg.out_dir = out.string();
    cfg.seed = 7;
    return cfg;
}

std::size_t count_substr(const std::string& text, const std::string& needle) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

} // namespace

TEST_CASE("analyze is byte-deterministic under a fixed seed") {
    const fs::path d1 = fresh_dir("nsamg_det1");
    const fs::path d2 = fresh_dir("nsamg_det2");
    RunConfig c1 = base_config(d1);
    RunConfig c2 = base_config(d2);
    REQUIRE(run_analyze(c1) == kExitOk);
    REQUIRE(run_analyze(c2) == kExitOk);
    for (const char* f : {"fap_constants.csv", "projection_norms.csv", "theory.json", "fap_constants.svg",
                          "projection_norms.svg"}) {
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
}

TEST_CASE("analyze with exact-SVD transfers: represented vectors have zero constants") {
    const fs::path dir = fresh_dir("nsamg_svd");
    RunConfig cfg = base_config(dir);
    cfg.transfer.interp = InterpKind::Svd;
    cfg.transfer.restrict_op = RestrictKind::Svd;
    REQUIRE(run_analyze(cfg) == kExitOk);
    const auto rows = parse_csv(slurp(dir / "fap_constants.csv"));
    // columns: side,builder,vector_index,sigma,K_wap,K_sap,K_ssap
    const nlohmann::json tj = nlohmann::json::parse(slurp(dir / "theory.json"));
    const int nc = tj["n_coarse"].get<int>();
    int checked = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const int idx = std::stoi(rows[r][2]);
        if (idx >= nc) continue;
        for (int col : {4, 5, 6}) CHECK(std::stod(rows[r][col]) <= 1e-10);
        ++checked;
    }
    CHECK(checked == 2 * nc);
}

TEST_CASE("analyze cross-checks: json agrees with csv; marker equals the operator norm") {
    const fs::path dir = fresh_dir("nsamg_xchk");
    RunConfig cfg = base_config(dir);
    REQUIRE(run_analyze(cfg) == kExitOk);
    const nlohmann::json tj = nlohmann::json::parse(slurp(dir / "theory.json"));
    const auto rows = parse_csv(slurp(dir / "projection_norms.csv"));
    double csv_norm = -1.0;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r][0] == "petrov_galerkin" && rows[r][1] == "QA" && rows[r].size() >= 6 && !rows[r][2].empty()) {
            csv_norm = std::stod(rows[r][5]);
            break;
        }
    REQUIRE(csv_norm > 0.0);
    CHECK(tj["projections"]["petrov_galerkin_QA"]["operator_norm"].get<double>() ==
          doctest::Approx(csv_norm).epsilon(1e-15));
    CHECK(tj["measured_Pi_QA"].get<double>() == doctest::Approx(csv_norm).epsilon(1e-10));

    // suprema over vectors approach the marker from below: random sampling
    // stays under it, the power-iteration refinement meets it
    const AnalysisSetup setup = prepare_analysis(cfg);
    const DenseMatrix Pi = cgc_projection(setup.P, setup.R, setup.F);
    const DenseMatrix QA = qa_power(setup.F, 1.0);
    const double sup = oracles::random_sup_norm(Pi, QA, 4000, 11);
    CHECK(sup <= csv_norm * (1.0 + 1e-6));
    const double sup_pi = oracles::power_sup_norm(Pi, QA, 300, 11);
    CHECK(sup_pi <= csv_norm * (1.0 + 1e-6));
    CHECK(csv_norm <= sup_pi * (1.0 + 1e-6));
}

TEST_CASE("analyze SVGs are well-formed with one polyline per series") {
    const fs::path dir = fresh_dir("nsamg_svg");
    RunConfig cfg = base_config(dir);
    REQUIRE(run_analyze(cfg) == kExitOk);
    const std::string fap = slurp(dir / "fap_constants.svg");
    // 6 constant series + the sigma series
    CHECK(count_substr(fap, "<polyline") == 7);
    CHECK(count_substr(fap, "<svg") == 1);
    CHECK(count_substr(fap, "</svg>") == 1);
    CHECK(fap.find("<?xml") == 0);

    const std::string proj = slurp(dir / "projection_norms.svg");
    const nlohmann::json tj = nlohmann::json::parse(slurp(dir / "theory.json"));
    std::size_t available = 0;
    for (const auto& [key, value] : tj["projections"].items())
        if (value["available"].get<bool>()) ++available;
    CHECK(count_substr(proj, "<polyline") == available + 1);
}

TEST_CASE("solve: certified exact-SVD two-grid records rho below its bound") {
    const fs::path dir = fresh_dir("nsamg_solve");
    RunConfig cfg = base_config(dir);
    cfg.transfer.interp = InterpKind::Svd;
    cfg.transfer.restrict_op = RestrictKind::Svd;
    cfg.levels = 2;
    cfg.nu = -1; // derive from the W-cycle requirement
    cfg.tol = 1e-9;
    REQUIRE(run_solve(cfg) == kExitOk);
    const nlohmann::json sj = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(sj["certified"].get<bool>());
    CHECK(sj["status"] == "converged");
    REQUIRE(sj.contains("rho_bound"));
    CHECK(sj["rho_measured_sq"].get<double>() <= sj["rho_bound"].get<double>() + 1e-6);

    // convergence.csv: the final row's residual honors the tolerance
    const auto rows = parse_csv(slurp(dir / "convergence.csv"));
    REQUIRE(rows.size() >= 3);
    const double first = std::stod(rows[1][1]);
    const double last = std::stod(rows.back()[1]);
    CHECK(last <= cfg.tol * first * 1.01 + 1e-300); // |b| equals the initial residual from x0 = 0
}

TEST_CASE("solve: nu = 0 stagnates with exit code 4 and keeps history") {
    const fs::path dir = fresh_dir("nsamg_stag");
    RunConfig cfg = base_config(dir);
    cfg.levels = 2;
    cfg.nu = 0;
    cfg.mu = 1;
    CHECK(run_solve(cfg) == kExitStagnation);
    const nlohmann::json sj = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(sj["status"] == "stagnated");
    CHECK(parse_csv(slurp(dir / "convergence.csv")).size() >= 10);
}

TEST_CASE("sweep: one row per n, failures tagged, duplicates kept") {
    const fs::path dir = fresh_dir("nsamg_sweep");
    RunConfig cfg = base_config(dir);
    cfg.sweep_ns = {8, 8, 12};
    REQUIRE(run_sweep(cfg) == kExitOk);
    auto rows = parse_csv(slurp(dir / "sweep.csv"));
    REQUIRE(rows.size() == 4); // header + 3
    CHECK(rows[1][0] == "8");
    CHECK(rows[2][0] == "8");
    CHECK(rows[1] == rows[2]); // duplicate n, identical row
    CHECK(rows[3][0] == "12");
    for (std::size_t r = 1; r < rows.size(); ++r) CHECK(rows[r].back().empty()); // no error tags

    // a failing (counterexample) pair produces an error-tagged row, others intact
    RunConfig bad = base_config(dir);
    bad.transfer.interp = InterpKind::Counterexample;
    bad.sweep_ns = {8, 12};
    REQUIRE(run_sweep(bad) == kExitOk);
    rows = parse_csv(slurp(dir / "sweep.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].back() == "SingularCoarseOperator");
    CHECK(rows[2].back() == "SingularCoarseOperator");
}

TEST_CASE("block-bound calculator and fuzzer") {
    BlockBoundArgs args;
    args.a0 = args.a1 = 2.0;
    args.b = args.c = 1.0;
    args.d0 = args.d1 = 2.0;
    std::string out;
    REQUIRE(run_block_bound(args, out) == kExitOk);
    CHECK(out.find("eta0 (appendix pairing):  1\n") != std::string::npos);
    CHECK(out.find("eta1 (appendix pairing):  9\n") != std::string::npos);
    CHECK(out.find("sigma_min^2 (a0,d0 block): 1\n") != std::string::npos);
    CHECK(out.find("sigma_max^2 (a1,d1 block): 9\n") != std::string::npos);
    CHECK(out.find("pairings agree: yes") != std::string::npos);

    BlockBoundArgs fuzz;
    fuzz.fuzz = 10000;
    fuzz.seed = 3;
    REQUIRE(run_block_bound(fuzz, out) == kExitOk);
    CHECK(out.find("appendix pairing violations: 0") != std::string::npos);
    CHECK(out.find("statement pairing violations: 0") != std::string::npos);
}

TEST_CASE("generate writes a readable MatrixMarket file") {
    const fs::path dir = fresh_dir("nsamg_gen");
    RunConfig cfg = base_config(dir);
    cfg.problem.n = 4;
    REQUIRE(run_generate(cfg) == kExitOk);
    const std::string text = slurp(dir / "matrix.mtx");
    CHECK(text.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);

    // and analyze accepts it back through --matrix
    RunConfig cfg2 = base_config(fresh_dir("nsamg_gen2"));
    cfg2.matrix_path = (dir / "matrix.mtx").string();
    CHECK(run_analyze(cfg2) == kExitOk);
}
