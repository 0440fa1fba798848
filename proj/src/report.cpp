#include "nsamg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "nsamg/matrix_market.hpp"
#include "nsamg/rng.hpp"

namespace nsamg {

namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct PlotSeries {
    std::string name;
    std::string color;
    bool dashed = false;
    std::vector<double> y;
};

struct PlotMarker {
    std::string name;
    std::string color;
    double y = 0.0;
};

constexpr double kLogFloor = 1e-16;

std::string render_log_svg(const std::string& title, std::size_t npoints, const std::vector<PlotSeries>& series,
                           const std::vector<PlotMarker>& markers) {
    const double width = 840, height = 560;
    const double left = 70, right = 30, top = 46, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;

    double lo = std::numeric_limits<double>::max(), hi = -std::numeric_limits<double>::max();
    auto feed = [&](double v) {
        const double f = std::log10(std::max(v, kLogFloor));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    };
    for (const auto& s : series)
        for (double v : s.y) feed(v);
    for (const auto& m : markers) feed(m.y);
    if (lo > hi) {
        lo = -1;
        hi = 1;
    }
    lo = std::floor(lo);
    hi = std::ceil(hi + 1e-9);
    if (hi <= lo) hi = lo + 1;

    auto xpos = [&](std::size_t i) {
        return left + (npoints <= 1 ? 0.5 : static_cast<double>(i) / (npoints - 1)) * pw;
    };
    auto ypos = [&](double v) {
        const double f = std::log10(std::max(v, kLogFloor));
        return top + (hi - f) / (hi - lo) * ph;
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes and decade gridlines.
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (double d = lo; d <= hi + 1e-9; d += 1.0) {
        const double y = top + (hi - d) / (hi - lo) * ph;
        svg << "<line x1=\"" << left << "\" y1=\"" << g6(y) << "\" x2=\"" << left + pw << "\" y2=\"" << g6(y)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"8\" y=\"" << g6(y + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">1e"
            << static_cast<int>(d) << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\">singular vector index (ascending sigma)</text>\n";

    for (const auto& m : markers) {
        svg << "<line x1=\"" << left << "\" y1=\"" << g6(ypos(m.y)) << "\" x2=\"" << left + pw << "\" y2=\""
            << g6(ypos(m.y)) << "\" stroke=\"" << m.color << "\" stroke-dasharray=\"10,6\"/>\n";
    }
    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
        if (s.dashed) svg << " stroke-dasharray=\"2,4\"";
        svg << " points=\"";
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            if (i) svg << ' ';
            svg << g6(xpos(i)) << ',' << g6(ypos(s.y[i]));
        }
        svg << "\"/>\n";
    }
    double ly = top + 14;
    for (const auto& s : series) {
        svg << "<text x=\"" << left + pw - 230 << "\" y=\"" << g6(ly) << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << s.color << "\">" << s.name << "</text>\n";
        ly += 14;
    }
    for (const auto& m : markers) {
        svg << "<text x=\"" << left + pw - 230 << "\" y=\"" << g6(ly) << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << m.color << "\">" << m.name << " (uniform)</text>\n";
        ly += 14;
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---------------------------------------------------------------------------
// Shared pipeline pieces
// ---------------------------------------------------------------------------

SparseMatrix load_or_generate(const RunConfig& config) {
    if (!config.matrix_path.empty()) return read_matrix_market(config.matrix_path);
    if (config.problem.disc == Discretization::UpwindFv) return gen_upwind_advection(config.problem);
    return gen_supg_advection(config.problem);
}

struct FapTriple {
    FapReport wap, sap, ssap;
};

FapTriple fap_triple(const DenseMatrix& T, const SvdFactorization& metric) {
    return FapTriple{fap_constant(T, metric, 0.5, 0.0), fap_constant(T, metric, 1.0, 1.0),
                     fap_constant(T, metric, 1.0, 0.0)};
}

struct VariantMeasure {
    std::string variant;
    std::string metric;
    bool available = false;
    std::string error;
    ProjectionMeasurement m;
};

std::string metric_name(ProjectionMetric m) { return m == ProjectionMetric::L2 ? "l2" : (m == ProjectionMetric::QA ? "QA" : "AQ"); }

VariantMeasure measure_variant(const std::string& variant, const DenseMatrix& P, const DenseMatrix& R,
                               const SvdFactorization& F, ProjectionMetric metric) {
    VariantMeasure vm;
    vm.variant = variant;
    vm.metric = metric_name(metric);
    try {
        vm.m = measure_projection(P, R, F, metric);
        vm.available = true;
    } catch (const Error& e) {
        vm.error = error_code_name(e.code());
    }
    return vm;
}

// Euclidean-orthogonal projection onto range(P), measured like the others.
VariantMeasure measure_l2_orthogonal(const DenseMatrix& P, const SvdFactorization& F) {
    VariantMeasure vm;
    vm.variant = "orthogonal";
    vm.metric = "l2";
    const DenseMatrix Pi0 = matmul(P, pseudo_inverse(P));
    const int n = F.V.rows();
    vm.m.amplification.resize(n);
    const DenseMatrix PiV = matmul(Pi0, F.V);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += PiV(r, i) * PiV(r, i);
        vm.m.amplification[i] = std::sqrt(s); // |v_i| = 1
    }
    vm.m.operator_norm = spectral_norm(Pi0);
    vm.m.operator_norm_sigma_route = vm.m.operator_norm;
    vm.available = true;
    return vm;
}

} // namespace

AnalysisSetup prepare_analysis(const RunConfig& config) {
    SparseMatrix raw = load_or_generate(config);
    SparseMatrix scaled = diagonal_scale(raw);
    ScaledSystem sys = normalize_spectral(scaled, true);
    SvdFactorization F = svd(sys.A.to_dense());
    TransferPair pair = build_transfer_pair(sys.A, &F, config.transfer);
    AnalysisSetup setup{std::move(sys), std::move(F), pair.P.to_dense(), pair.R.to_dense(), pair};
    return setup;
}

int run_generate(const RunConfig& config) {
    SparseMatrix raw = load_or_generate(config);
    fs::create_directories(config.out_dir);
    write_matrix_market(raw, (fs::path(config.out_dir) / "matrix.mtx").string());
    return kExitOk;
}

int run_analyze(const RunConfig& config) {
    const AnalysisSetup setup = prepare_analysis(config);
    const SvdFactorization& F = setup.F;
    const int n = F.V.rows();
    const SvdFactorization Fqa = qa_factorization(F);
    const SvdFactorization Faq = aq_factorization(F);

    const FapTriple fapP = fap_triple(setup.P, Fqa);
    const FapTriple fapR = fap_triple(setup.R, Faq);

    // fap_constants.csv
    std::ostringstream fap_csv;
    fap_csv << "side,builder,vector_index,sigma,K_wap,K_sap,K_ssap\r\n";
    auto emit_fap = [&](const char* side, const std::string& builder, const FapTriple& t) {
        for (int i = 0; i < n; ++i)
            fap_csv << side << ',' << builder << ',' << i << ',' << g17(F.sigma[i]) << ',' << g17(t.wap.per_vector[i])
                    << ',' << g17(t.sap.per_vector[i]) << ',' << g17(t.ssap.per_vector[i]) << "\r\n";
    };
    emit_fap("interp", setup.pair.builder_P, fapP);
    emit_fap("restrict", setup.pair.builder_R, fapR);

    // Projections: orthogonal / galerkin / petrov_galerkin in l2 and QA.
    const DenseMatrix Q = polar_q(F);
    const DenseMatrix Rq = q_pair_restrict(setup.P, Q);
    std::vector<VariantMeasure> variants;
    variants.push_back(measure_l2_orthogonal(setup.P, F));
    variants.push_back(measure_variant("orthogonal", setup.P, Rq, F, ProjectionMetric::QA));
    variants.push_back(measure_variant("galerkin", setup.P, setup.P, F, ProjectionMetric::L2));
    variants.push_back(measure_variant("galerkin", setup.P, setup.P, F, ProjectionMetric::QA));
    variants.push_back(measure_variant("petrov_galerkin", setup.P, setup.R, F, ProjectionMetric::L2));
    variants.push_back(measure_variant("petrov_galerkin", setup.P, setup.R, F, ProjectionMetric::QA));

    std::ostringstream proj_csv;
    proj_csv << "variant,metric,vector_index,sigma,amplification,operator_norm\r\n";
    for (const auto& vm : variants) {
        if (!vm.available) {
            proj_csv << vm.variant << ',' << vm.metric << ",,," << ',' << vm.error << "\r\n";
            continue;
        }
        for (int i = 0; i < n; ++i)
            proj_csv << vm.variant << ',' << vm.metric << ',' << i << ',' << g17(F.sigma[i]) << ','
                     << g17(vm.m.amplification[i]) << ',' << g17(vm.m.operator_norm) << "\r\n";
    }

    // Theory summary.
    std::optional<BasisDecomposition> chosen = select_k(setup.P, setup.R, F, config.beta, config.gamma);
    std::optional<BasisDecomposition> reported = chosen;
    if (!reported) {
        // No k certifies; report the flags at the largest buildable k.
        for (int k = setup.P.cols(); k >= 1 && !reported; --k) {
            try {
                reported = build_pr_bases(setup.P, setup.R, F, k, config.beta, config.gamma);
            } catch (const Error&) {
            }
        }
    }

    ordered_json tj;
    tj["problem"] = {{"disc", config.matrix_path.empty()
                              ? (config.problem.disc == Discretization::UpwindFv ? "upwind" : "supg")
                              : "matrix"},
                     {"n", config.problem.n},
                     {"theta", config.problem.theta},
                     {"tau", config.problem.tau},
                     {"seed", config.seed}};
    tj["builders"] = {{"interp", setup.pair.builder_P}, {"restrict", setup.pair.builder_R}};
    tj["beta"] = config.beta;
    tj["gamma"] = config.gamma;
    tj["n"] = n;
    tj["n_coarse"] = setup.P.cols();
    tj["coarsening_ratio"] = static_cast<double>(setup.P.cols()) / n;
    tj["select_k_found"] = chosen.has_value();

    if (reported) {
        const BasisDecomposition& d = *reported;
        const StabilityHypotheses hyp = stability_hypotheses(d);
        StabilityReport stab = stability_bound(setup.P, setup.R, F, d);
        tj["k"] = d.k;
        tj["sigma_k"] = d.sigma_k;
        tj["delta_P"] = d.delta_P;
        tj["delta_R"] = d.delta_R;
        tj["delta_PR_sq"] = d.delta_PR_sq;
        tj["s1"] = d.s1();
        tj["Khat_P"] = d.Khat_P;
        tj["Khat_R"] = d.Khat_R;
        tj["hypotheses"] = {{"delta_P_ok", hyp.delta_P_ok},
                            {"delta_R_ok", hyp.delta_R_ok},
                            {"delta_PR_ok", hyp.delta_PR_ok},
                            {"s1_ok", hyp.s1_ok}};
        tj["eta0"] = stab.eta0;
        tj["eta1"] = stab.eta1;
        tj["C_Pi_bound"] = stab.C_Pi_bound;
        tj["measured_Pi_QA"] = stab.measured_Pi_QA;
        tj["measured_Pi_l2"] = stab.measured_Pi_l2;

        try {
            const CgcAngleReport angle = cgc_angle(setup.P, setup.R, F);
            tj["theta_min"] = angle.theta_min;
            tj["measured_I_minus_Pi_QA"] = angle.I_minus_Pi_QA;
        } catch (const Error& e) {
            tj["theta_min_error"] = error_code_name(e.code());
        }

        try {
            const EquivalenceReport eq = inner_product_equivalence(setup.P, setup.R, F, d);
            tj["equivalence"] = {{"c0_measured", eq.c0_measured}, {"c1_measured", eq.c1_measured},
                                 {"c0_bound", eq.c0_bound},       {"c1_bound", eq.c1_bound},
                                 {"hyp5_ok", eq.hyp5_ok},         {"beta_ok", eq.beta_ok},
                                 {"bounds_valid", eq.bounds_valid}};
            if (eq.c0_measured > 0.0) {
                const WcycleRequirements wr = wcycle_requirements(
                    eq.c0_measured, eq.c1_measured, fapP.sap.uniform_K,
                    stab.measured_Pi_QA * stab.measured_Pi_QA, config.beta > 0.5 ? config.beta : 1.0);
                tj["wcycle"] = {{"nu_min", wr.nu_min},
                                {"C_mu", wr.C_mu},
                                {"C_mu_text", wr.C_mu_text},
                                {"rho_bound", wr.rho_bound}};
            }
        } catch (const Error& e) {
            tj["equivalence_error"] = error_code_name(e.code());
        }
    } else {
        tj["k_error"] = "no decomposition could be built";
    }
    tj["fap_uniform"] = {{"P", {{"K_wap", fapP.wap.uniform_K}, {"K_sap", fapP.sap.uniform_K}, {"K_ssap", fapP.ssap.uniform_K}}},
                         {"R", {{"K_wap", fapR.wap.uniform_K}, {"K_sap", fapR.sap.uniform_K}, {"K_ssap", fapR.ssap.uniform_K}}}};
    tj["lemma28_note"] = "eta formulas use the appendix discriminant pairing; the statement pairing is "
                         "algebraically identical for scalar bounds and is reported by the block-bound command";
    for (const auto& vm : variants) {
        ordered_json v;
        v["available"] = vm.available;
        if (vm.available) {
            v["operator_norm"] = vm.m.operator_norm;
            v["operator_norm_sigma_route"] = vm.m.operator_norm_sigma_route;
        } else {
            v["error"] = vm.error;
        }
        tj["projections"][vm.variant + "_" + vm.metric] = v;
    }

    // SVG plots.
    const std::vector<std::string> palette = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#000000"};
    std::string fap_svg, proj_svg;
    {
        std::vector<PlotSeries> series;
        std::vector<PlotMarker> markers;
        auto add = [&](const std::string& name, const std::vector<double>& y, const std::string& color) {
            series.push_back(PlotSeries{name, color, false, y});
            double mx = kLogFloor;
            for (double v : y) mx = std::max(mx, v);
            markers.push_back(PlotMarker{name, color, mx});
        };
        add("P " + setup.pair.builder_P + " WAP", fapP.wap.per_vector, palette[0]);
        add("P " + setup.pair.builder_P + " SAP", fapP.sap.per_vector, palette[1]);
        add("P " + setup.pair.builder_P + " SSAP", fapP.ssap.per_vector, palette[2]);
        add("R " + setup.pair.builder_R + " WAP", fapR.wap.per_vector, palette[3]);
        add("R " + setup.pair.builder_R + " SAP", fapR.sap.per_vector, palette[4]);
        add("R " + setup.pair.builder_R + " SSAP", fapR.ssap.per_vector, palette[5]);
        series.push_back(PlotSeries{"sigma", "#1f77b4", true, F.sigma});
        fap_svg = render_log_svg("approximation property constants per singular vector", n, series, markers);
    }
    {
        std::vector<PlotSeries> series;
        std::vector<PlotMarker> markers;
        std::size_t ci = 0;
        for (const auto& vm : variants) {
            if (!vm.available) continue;
            const std::string color = palette[ci % palette.size()];
            ++ci;
            series.push_back(PlotSeries{vm.variant + " " + vm.metric, color, false, vm.m.amplification});
            markers.push_back(PlotMarker{vm.variant + " " + vm.metric, color, vm.m.operator_norm});
        }
        series.push_back(PlotSeries{"sigma", "#1f77b4", true, F.sigma});
        proj_svg = render_log_svg("projection amplification per right singular vector", n, series, markers);
    }

    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    if (config.formats.csv) {
        write_file_atomic(dir / "fap_constants.csv", fap_csv.str());
        write_file_atomic(dir / "projection_norms.csv", proj_csv.str());
    }
    if (config.formats.json) write_file_atomic(dir / "theory.json", tj.dump(2) + "\n");
    if (config.formats.svg) {
        write_file_atomic(dir / "fap_constants.svg", fap_svg);
        write_file_atomic(dir / "projection_norms.svg", proj_svg);
    }
    return kExitOk;
}

namespace {

struct Certification {
    bool certified = false;
    double K_sap = 0.0;     // max over levels, FAP(beta,1)
    double C_Pi_sq = 1.0;   // max over levels of measured |Pi|_QA^2
    double c0 = 1.0;        // min over levels
    double c1 = 1.0;        // max over levels
    std::optional<WcycleRequirements> wreq;
};

Certification certify_hierarchy(const Hierarchy& h, double beta, double gamma) {
    Certification cert;
    cert.certified = true;
    cert.c0 = std::numeric_limits<double>::max();
    cert.c1 = 0.0;
    for (const Level& lvl : h.levels) {
        if (!lvl.has_transfers) continue;
        const SvdFactorization& F = lvl.factorization();
        const DenseMatrix P = lvl.P.to_dense();
        const DenseMatrix R = lvl.R.to_dense();
        const auto opt = select_k(P, R, F, beta, gamma);
        if (!opt) {
            cert.certified = false;
            continue;
        }
        const StabilityReport stab = stability_bound(P, R, F, *opt);
        const EquivalenceReport eq = inner_product_equivalence(P, R, F, *opt);
        if (!eq.bounds_valid) cert.certified = false;
        const double Ksap = fap_constant(P, qa_factorization(F), beta, 1.0).uniform_K;
        cert.K_sap = std::max(cert.K_sap, Ksap);
        cert.C_Pi_sq = std::max(cert.C_Pi_sq, stab.measured_Pi_QA * stab.measured_Pi_QA);
        cert.c0 = std::min(cert.c0, eq.c0_measured);
        cert.c1 = std::max(cert.c1, eq.c1_measured);
    }
    if (cert.c0 <= 0.0 || cert.c1 < cert.c0) cert.certified = false;
    if (cert.certified)
        cert.wreq = wcycle_requirements(cert.c0, cert.c1, cert.K_sap, cert.C_Pi_sq, beta);
    return cert;
}

} // namespace

int run_solve(const RunConfig& config) {
    SparseMatrix raw = load_or_generate(config);
    SparseMatrix scaled = diagonal_scale(raw);
    ScaledSystem sys = normalize_spectral(scaled, true);

    HierarchyConfig hc;
    hc.transfer = config.transfer;
    hc.max_levels = config.levels;
    hc.coarsest_max = config.coarsest_max;
    const Hierarchy h = build_hierarchy(sys, hc);

    const Certification cert = certify_hierarchy(h, config.beta, config.gamma);
    int nu = config.nu;
    if (nu < 0) nu = cert.wreq ? std::max(1, cert.wreq->nu_min) : 4;

    Rng rng(config.seed);
    Vector x_true(h.levels.front().A.rows());
    for (double& v : x_true) v = rng.uniform(-1.0, 1.0);
    const Vector b = h.levels.front().A.apply(x_true);

    const SolveReport rep = (config.levels <= 2 && h.levels.size() == 2)
                                ? two_grid_solve(h, b, nu, config.tol, config.max_iters, &x_true)
                                : mu_cycle_solve(h, b, nu, config.mu, config.tol, config.max_iters, &x_true);

    std::ostringstream conv;
    conv << "iter,l2_residual,qa_error\r\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
        conv << i << ',' << g17(rep.residual_history[i]) << ',';
        if (i < rep.error_history_qa.size()) conv << g17(rep.error_history_qa[i]);
        conv << "\r\n";
    }

    ordered_json sj;
    sj["status"] = rep.status == SolveStatus::Converged
                       ? "converged"
                       : (rep.status == SolveStatus::Stagnated ? "stagnated" : "max_iterations");
    sj["cycle"] = rep.cycle == CycleKind::TwoGrid ? "two_grid" : "mu_cycle";
    sj["nu"] = nu;
    sj["mu"] = config.mu;
    sj["iterations"] = rep.iterations;
    sj["level_sizes"] = h.level_sizes();
    {
        std::vector<double> ratios;
        const auto sizes = h.level_sizes();
        for (std::size_t i = 1; i < sizes.size(); ++i)
            ratios.push_back(static_cast<double>(sizes[i]) / sizes[i - 1]);
        sj["coarsening_ratios"] = ratios;
    }
    {
        // geometric mean over the available tail (up to the last 5 ratios)
        const std::vector<double>& hist =
            rep.error_history_qa.size() >= 2 ? rep.error_history_qa : rep.residual_history;
        std::vector<double> ratios;
        for (std::size_t i = 1; i < hist.size(); ++i)
            if (hist[i - 1] > 0.0) ratios.push_back(hist[i] / hist[i - 1]);
        if (!ratios.empty()) {
            const std::size_t take = std::min<std::size_t>(5, ratios.size());
            double prod = 1.0;
            for (std::size_t i = ratios.size() - take; i < ratios.size(); ++i) prod *= ratios[i];
            const double rho = std::pow(prod, 1.0 / take);
            sj["rho_measured"] = rho;
            sj["rho_measured_sq"] = rho * rho;
        } else {
            sj["rho_measured"] = nullptr;
        }
    }
    sj["certified"] = cert.certified;
    if (cert.wreq) {
        sj["nu_min"] = cert.wreq->nu_min;
        sj["rho_bound"] = cert.wreq->rho_bound;
        sj["C_mu"] = cert.wreq->C_mu;
        sj["C_mu_text"] = cert.wreq->C_mu_text;
        sj["K_sap"] = cert.K_sap;
        sj["C_Pi_measured_sq"] = cert.C_Pi_sq;
        sj["c0"] = cert.c0;
        sj["c1"] = cert.c1;
    }

    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    if (config.formats.csv) write_file_atomic(dir / "convergence.csv", conv.str());
    if (config.formats.json) write_file_atomic(dir / "summary.json", sj.dump(2) + "\n");

    return rep.status == SolveStatus::Stagnated ? kExitStagnation : kExitOk;
}

int run_sweep(const RunConfig& config) {
    if (config.sweep_ns.empty()) throw Error(ErrorCode::ConfigError, "sweep requires a list of n values");
    std::ostringstream csv;
    csv << "n,interp,restrict,K_wap_P,K_sap_P,K_ssap_P,K_wap_R,K_sap_R,K_ssap_R,Pi_QA,C_Pi_bound,c1_over_c0,nu_min,"
           "rho_measured,error\r\n";
    for (int n : config.sweep_ns) {
        RunConfig row_cfg = config;
        row_cfg.problem.n = n;
        csv << n << ',' << interp_name(config.transfer.interp) << ',' << restrict_name(config.transfer.restrict_op);
        try {
            const AnalysisSetup setup = prepare_analysis(row_cfg);
            const SvdFactorization Fqa = qa_factorization(setup.F);
            const SvdFactorization Faq = aq_factorization(setup.F);
            const FapTriple fapP = fap_triple(setup.P, Fqa);
            const FapTriple fapR = fap_triple(setup.R, Faq);
            const auto opt = select_k(setup.P, setup.R, setup.F, row_cfg.beta, row_cfg.gamma);

            double pi_qa = std::numeric_limits<double>::quiet_NaN();
            double c_pi_bound = std::numeric_limits<double>::quiet_NaN();
            double c_ratio = std::numeric_limits<double>::quiet_NaN();
            int nu_min = -1;
            if (opt) {
                const StabilityReport stab = stability_bound(setup.P, setup.R, setup.F, *opt);
                pi_qa = stab.measured_Pi_QA;
                c_pi_bound = stab.C_Pi_bound;
                const EquivalenceReport eq = inner_product_equivalence(setup.P, setup.R, setup.F, *opt);
                if (eq.c0_measured > 0.0) {
                    c_ratio = eq.c1_measured / eq.c0_measured;
                    const WcycleRequirements wr = wcycle_requirements(eq.c0_measured, eq.c1_measured,
                                                                      fapP.sap.uniform_K, pi_qa * pi_qa, row_cfg.beta);
                    nu_min = wr.nu_min;
                }
            } else {
                const DenseMatrix Pi = cgc_projection(setup.P, setup.R, setup.F);
                pi_qa = operator_norm_weighted(Pi, qa_power(setup.F, 0.5), qa_power(setup.F, -0.5));
            }

            // A short solve for the measured convergence factor.
            double rho = std::numeric_limits<double>::quiet_NaN();
            {
                HierarchyConfig hcfg;
                hcfg.transfer = row_cfg.transfer;
                hcfg.max_levels = 2;
                hcfg.coarsest_max = config.coarsest_max;
                const Hierarchy h = build_hierarchy(ScaledSystem{setup.system.A, setup.system.scale, true}, hcfg);
                if (h.levels.size() == 2) {
                    Rng rng(row_cfg.seed);
                    Vector x_true(h.levels.front().A.rows());
                    for (double& v : x_true) v = rng.uniform(-1.0, 1.0);
                    const Vector b = h.levels.front().A.apply(x_true);
                    const int nu = row_cfg.nu >= 0 ? row_cfg.nu : 4;
                    const SolveReport rep = two_grid_solve(h, b, nu, 0.0, 12, &x_true);
                    rho = measure_rho(rep);
                }
            }

            csv << ',' << g17(fapP.wap.uniform_K) << ',' << g17(fapP.sap.uniform_K) << ',' << g17(fapP.ssap.uniform_K)
                << ',' << g17(fapR.wap.uniform_K) << ',' << g17(fapR.sap.uniform_K) << ',' << g17(fapR.ssap.uniform_K)
                << ',' << g17(pi_qa) << ',' << g17(c_pi_bound) << ',' << g17(c_ratio) << ',' << nu_min << ','
                << g17(rho) << ",\r\n";
        } catch (const Error& e) {
            csv << ",,,,,,,,,,," << error_code_name(e.code()) << "\r\n";
        }
    }
    fs::create_directories(config.out_dir);
    write_file_atomic(fs::path(config.out_dir) / "sweep.csv", csv.str());
    return kExitOk;
}

int run_block_bound(const BlockBoundArgs& args, std::string& out) {
    std::ostringstream os;
    const auto scalar_extremes = [](double a, double b, double c, double d) {
        // Exact singular values squared of [[a, -b], [-c, d]].
        const double t = a * a + b * b + c * c + d * d;
        const double det = a * d - b * c;
        const double disc = std::sqrt(std::max(t * t - 4.0 * det * det, 0.0));
        return std::pair<double, double>{(t - disc) / 2.0, (t + disc) / 2.0};
    };

    if (args.fuzz > 0) {
        Rng rng(args.seed);
        int tried = 0, appendix_viol = 0, statement_viol = 0;
        while (tried < args.fuzz) {
            const double a = rng.uniform(0.05, 3.0);
            const double d = rng.uniform(0.05, 3.0);
            const double b = rng.uniform(0.0, 3.0);
            const double c = rng.uniform(0.0, 3.0);
            if (!(a * d > b * c)) continue;
            ++tried;
            const BlockBounds bb = block_bounds(a, a, b, c, d, d);
            const auto [lo, hi] = scalar_extremes(a, b, c, d);
            const double slack = 1e-9 * std::max(1.0, hi);
            if (bb.eta0 > lo + slack || bb.eta1 < hi - slack) ++appendix_viol;
            if (bb.eta0_statement > lo + slack || bb.eta1_statement < hi - slack) ++statement_viol;
        }
        os << "fuzz samples: " << tried << "\n";
        os << "appendix pairing violations: " << appendix_viol << "\n";
        os << "statement pairing violations: " << statement_viol << "\n";
        out = os.str();
        return (appendix_viol == 0) ? kExitOk : kExitNumerical;
    }

    const BlockBounds bb = block_bounds(args.a0, args.a1, args.b, args.c, args.d0, args.d1);
    const auto [lo0, hi0] = scalar_extremes(args.a0, args.b, args.c, args.d0);
    const auto [lo1, hi1] = scalar_extremes(args.a1, args.b, args.c, args.d1);
    os << "inputs: a0=" << g17(args.a0) << " a1=" << g17(args.a1) << " b=" << g17(args.b) << " c=" << g17(args.c)
       << " d0=" << g17(args.d0) << " d1=" << g17(args.d1) << "\n";
    os << "eta0 (appendix pairing):  " << g17(bb.eta0) << "\n";
    os << "eta1 (appendix pairing):  " << g17(bb.eta1) << "\n";
    os << "eta0 (statement pairing): " << g17(bb.eta0_statement) << "\n";
    os << "eta1 (statement pairing): " << g17(bb.eta1_statement) << "\n";
    os << "scalar oracle sigma_min^2 (a0,d0 block): " << g17(lo0) << "\n";
    os << "scalar oracle sigma_max^2 (a1,d1 block): " << g17(hi1) << "\n";
    const bool statement_matches = std::fabs(bb.eta0 - bb.eta0_statement) <= 1e-9 * std::max(1.0, bb.eta1) &&
                                   std::fabs(bb.eta1 - bb.eta1_statement) <= 1e-9 * std::max(1.0, bb.eta1);
    os << "pairings agree: " << (statement_matches ? "yes" : "NO") << "\n";
    out = os.str();
    return kExitOk;
}

} // namespace nsamg
