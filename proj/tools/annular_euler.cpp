// Command-line front end: dispersion tables, bifurcation diagrams, branch
// tracing, stability runs, and the verification suite, with deterministic
// CSV/JSON/SVG outputs.
//
// Exit codes: 0 success, 2 configuration error, 3 solver error,
// 4 verification failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "annular/continuation.hpp"
#include "annular/dispersion.hpp"
#include "annular/elliptic.hpp"
#include "annular/errors.hpp"
#include "annular/io.hpp"
#include "annular/verification.hpp"

using namespace annular;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string problem = "single";  // single | two | pair
    std::vector<double> lambdas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<int> k_list = {1, 2, 3, 5, 10, 20, 100};
    double gamma = 0.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    int modes = 16;
    int nr = 33;
    int ntheta = 64;
    double tol = 1e-9;
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};
    // branch
    int steps = 20;
    double ds = 0.002;
    int root_index = 0;
    // stability
    int rho_k = 2;
    double rho_amp = 1e-3;
    int rho_in_k = 0;
    double rho_in_amp = 0.0;
};

ProblemKind parse_problem(const std::string& p) {
    if (p == "single") return ProblemKind::single_phase;
    if (p == "two" || p == "two_phase") return ProblemKind::two_phase;
    if (p == "pair") return ProblemKind::pair;
    throw ConfigError("unknown problem '" + p + "' (single|two|pair)");
}

// "a,b,c" or "start:stop:step"
std::vector<double> parse_lambda_spec(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start, stop, step;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
            step <= 0.0)
            throw ConfigError("bad lambda range '" + spec + "'");
        for (double v = start; v <= stop + 1e-12; v += step) out.push_back(v);
    } else {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("empty lambda list");
    for (double v : out)
        if (!(v > 0.0 && v < 1.0))
            throw ConfigError("lambda values must lie in (0,1)");
    return out;
}

void validate(const RunConfig& cfg) {
    for (int k : cfg.k_list)
        if (k < 1) throw ConfigError("mode indices must be >= 1");
    if (cfg.tol <= 0.0) throw ConfigError("tolerance must be positive");
    if (cfg.modes < 1 || cfg.nr < 4 || cfg.ntheta < 8 || cfg.ntheta % 4 != 0)
        throw ConfigError("bad resolution settings");
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) !=
           cfg.formats.end();
}

nlohmann::json base_manifest(const RunConfig& cfg, const std::string& command) {
    return {{"command", command},
            {"problem", cfg.problem},
            {"tolerances", {{"newton", cfg.tol}}},
            {"resolutions",
             {{"modes", cfg.modes}, {"n_radial", cfg.nr}, {"n_angular", cfg.ntheta}}}};
}

void write_manifest(const RunConfig& cfg, nlohmann::json manifest,
                    const RunReport& report, const std::string& name) {
    manifest["oracle_discrepancy_log"] = discrepancies_to_json(report);
    write_json(fs::path(cfg.out_dir) / name, manifest);
}

// ---- diagram / dispersion ----------------------------------------------------

int cmd_diagram(const RunConfig& cfg, bool table_only) {
    ProblemKind kind = parse_problem(cfg.problem);
    fs::create_directories(cfg.out_dir);
    RunReport report;

    CsvTable table;
    std::vector<SvgSeries> series;
    const int n_cells = static_cast<int>(cfg.k_list.size() * cfg.lambdas.size());
    std::vector<std::vector<double>> rows(n_cells);

    switch (kind) {
        case ProblemKind::single_phase: {
            table.header = {"k", "lambda", "gamma_root", "residual"};
            parallel_for(n_cells, [&](int idx) {
                int k = cfg.k_list[idx / cfg.lambdas.size()];
                double lambda = cfg.lambdas[idx % cfg.lambdas.size()];
                double root = bifurcation_gamma_single(k, lambda);
                rows[idx] = {double(k), lambda, root,
                             single_phase_root_residual(k, lambda)};
            });
            break;
        }
        case ProblemKind::two_phase: {
            table.header = {"k", "lambda", "gamma1", "gamma_root",
                            "gamma_root_over_gamma1", "residual"};
            parallel_for(n_cells, [&](int idx) {
                int k = cfg.k_list[idx / cfg.lambdas.size()];
                double lambda = cfg.lambdas[idx % cfg.lambdas.size()];
                double root = bifurcation_gamma2_two_phase(k, lambda, cfg.gamma1);
                rows[idx] = {double(k),        lambda,
                             cfg.gamma1,       root,
                             root / cfg.gamma1, two_phase_root_residual(
                                                    k, lambda, cfg.gamma1)};
            });
            break;
        }
        case ProblemKind::pair: {
            table.header = {"k",            "lambda",     "real_roots",
                            "gamma_root_1", "gamma_root_2", "residual_1",
                            "residual_2"};
            parallel_for(n_cells, [&](int idx) {
                int k = cfg.k_list[idx / cfg.lambdas.size()];
                double lambda = cfg.lambdas[idx % cfg.lambdas.size()];
                auto roots = pair_bifurcation_gammas(k, lambda);
                double r1 = std::nan(""), r2 = std::nan(""), d1 = std::nan(""),
                       d2 = std::nan("");
                if (roots.real) {
                    r1 = roots.gamma_star;
                    r2 = roots.gamma_star2;
                    d1 = std::abs(pair_matrix(k, lambda, r1).det_scaled());
                    d2 = std::abs(pair_matrix(k, lambda, r2).det_scaled());
                }
                rows[idx] = {double(k), lambda, roots.real ? 1.0 : 0.0,
                             r1,        r2,     d1,
                             d2};
            });
            break;
        }
    }
    table.rows = rows;
    std::string stem = table_only ? "dispersion" : "diagram";
    std::string csv_name = stem + "_" + cfg.problem + ".csv";
    if (wants(cfg, "csv")) write_csv(fs::path(cfg.out_dir) / csv_name, table);

    if (wants(cfg, "svg") && !table_only) {
        int root_col = kind == ProblemKind::two_phase ? 4
                       : kind == ProblemKind::pair    ? 3
                                                      : 2;
        for (size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
            SvgSeries s;
            s.label = "k=" + std::to_string(cfg.k_list[ki]);
            for (size_t li = 0; li < cfg.lambdas.size(); ++li) {
                s.x.push_back(cfg.lambdas[li]);
                s.y.push_back(rows[ki * cfg.lambdas.size() + li][root_col]);
            }
            series.push_back(std::move(s));
        }
        write_svg_chart(fs::path(cfg.out_dir) / (stem + "_" + cfg.problem + ".svg"),
                        "bifurcation vorticity vs lambda (" + cfg.problem + ")",
                        series);
    }
    if (wants(cfg, "json")) {
        auto manifest = base_manifest(cfg, table_only ? "dispersion" : "diagram");
        manifest["outputs"] = nlohmann::json::array({csv_name});
        if (wants(cfg, "svg") && !table_only)
            manifest["outputs"].push_back(stem + "_" + cfg.problem + ".svg");
        write_manifest(cfg, manifest, report,
                       stem + "_" + cfg.problem + "_manifest.json");
    }
    return 0;
}

// ---- branch --------------------------------------------------------------------

int cmd_branch(const RunConfig& cfg) {
    ProblemKind kind = parse_problem(cfg.problem);
    fs::create_directories(cfg.out_dir);
    RunReport report;

    double lambda = cfg.lambdas.front();
    int k0 = cfg.k_list.front();
    auto roots = detect_bifurcation(kind, k0, lambda, cfg.gamma1);
    if (roots.empty())
        throw SolverError("no bifurcation value found for this mode");
    if (cfg.root_index < 0 || cfg.root_index >= static_cast<int>(roots.size()))
        throw ConfigError("root index out of range");
    double gamma0 = roots[cfg.root_index];

    BranchOptions bopts;
    bopts.newton.tol = cfg.tol;
    bopts.newton.n_modes = cfg.modes;
    bopts.newton.solver = SolverOptions{cfg.nr, cfg.ntheta, 1e-6};
    Branch b =
        trace_branch(kind, k0, lambda, gamma0, cfg.ds, cfg.steps, cfg.gamma1, bopts);

    CsvTable t;
    t.header = {"step", "s", "gamma", "residual_sup"};
    for (int m = 1; m <= b.mode_truncation; ++m)
        t.header.push_back("eta_" + std::to_string(m));
    if (kind == ProblemKind::pair)
        for (int m = 1; m <= b.mode_truncation; ++m)
            t.header.push_back("xi_" + std::to_string(m));
    double max_res = 0.0;
    for (size_t i = 0; i < b.points.size(); ++i) {
        const auto& p = b.points[i];
        max_res = std::max(max_res, p.residual_sup);
        std::vector<double> row = {double(i), p.s, p.gamma, p.residual_sup};
        for (int m = 1; m <= b.mode_truncation; ++m) row.push_back(p.eta.coeff(m));
        if (kind == ProblemKind::pair)
            for (int m = 1; m <= b.mode_truncation; ++m)
                row.push_back(p.xi.coeff(m));
        t.rows.push_back(row);
    }
    std::string csv_name = "branch_" + cfg.problem + ".csv";
    write_csv(fs::path(cfg.out_dir) / csv_name, t);

    auto manifest = base_manifest(cfg, "branch");
    manifest["k0"] = k0;
    manifest["lambda"] = lambda;
    manifest["gamma0"] = gamma0;
    manifest["ds"] = cfg.ds;
    manifest["steps"] = cfg.steps;
    manifest["max_residual_sup"] = max_res;
    manifest["terminated_early"] = b.terminated_early;
    if (b.terminated_early) manifest["termination_reason"] = b.termination_reason;
    manifest["outputs"] = {csv_name};
    write_manifest(cfg, manifest, report, "branch_" + cfg.problem +
                                              "_manifest.json");

    if (b.terminated_early || max_res > cfg.tol) {
        std::fprintf(stderr, "branch run failed: %s (max residual %.3e)\n",
                     b.termination_reason.c_str(), max_res);
        return 3;
    }
    return 0;
}

// ---- stability -------------------------------------------------------------------

int cmd_stability(const RunConfig& cfg) {
    ProblemKind kind = parse_problem(cfg.problem);
    fs::create_directories(cfg.out_dir);
    RunReport report;
    double lambda = cfg.lambdas.front();

    NewtonOptions nopts;
    nopts.tol = cfg.tol;
    nopts.n_modes = cfg.modes;
    nopts.solver = SolverOptions{cfg.nr, cfg.ntheta, 1e-6};

    CosineSeries rho = CosineSeries::harmonic(cfg.rho_k, cfg.rho_amp, cfg.modes);

    CsvTable t;
    t.header = {"mode", "rho_coeff", "solved_coeff", "predicted_coeff"};
    nlohmann::json manifest = base_manifest(cfg, "stability");
    manifest["lambda"] = lambda;

    std::string csv_name = "stability_" + cfg.problem + ".csv";
    if (kind == ProblemKind::pair) {
        CosineSeries rho_in =
            cfg.rho_in_k > 0
                ? CosineSeries::harmonic(cfg.rho_in_k, cfg.rho_in_amp, cfg.modes)
                : CosineSeries::zero(cfg.modes);
        auto res = newton_solve_calG(lambda, cfg.gamma, rho, rho_in, nopts);
        t.header = {"mode",       "rho_out",      "rho_in",      "eta_coeff",
                    "xi_coeff",   "predicted_eta", "predicted_xi"};
        for (int m = 1; m <= cfg.modes; ++m)
            t.rows.push_back({double(m), rho.coeff(m), rho_in.coeff(m),
                              res.eta.coeff(m), res.xi.coeff(m),
                              res.predicted_eta.coeff(m),
                              res.predicted_xi.coeff(m)});
        manifest["residual_sup"] = res.residual_sup;
        manifest["newton_iters"] = res.newton_iters;
        manifest["dq_out"] = res.dq_out;
        manifest["dq_in"] = res.dq_in;
    } else {
        StabilityResult res =
            kind == ProblemKind::single_phase
                ? newton_solve_G(lambda, cfg.gamma, rho, nopts)
                : newton_solve_H(lambda, cfg.gamma1, cfg.gamma2, rho, nopts);
        for (int m = 1; m <= cfg.modes; ++m)
            t.rows.push_back({double(m), rho.coeff(m), res.eta.coeff(m),
                              res.predicted.coeff(m)});
        manifest["residual_sup"] = res.residual_sup;
        manifest["newton_iters"] = res.newton_iters;
        manifest["bernoulli_correction"] = res.bernoulli_correction;
    }
    write_csv(fs::path(cfg.out_dir) / csv_name, t);
    manifest["outputs"] = {csv_name};
    write_manifest(cfg, manifest, report, "stability_" + cfg.problem +
                                              "_manifest.json");
    return 0;
}

// ---- verify ----------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    VerifyOptions vopts;
    vopts.out_dir = cfg.out_dir;
    auto outcome = run_acceptance(vopts);

    nlohmann::json criteria = nlohmann::json::array();
    for (const auto& c : outcome.criteria) {
        std::printf("%s\n", format_criterion_line(c).c_str());
        criteria.push_back({{"id", c.id},
                            {"name", c.name},
                            {"passed", c.passed},
                            {"detail", c.detail}});
    }
    nlohmann::json report = {
        {"command", "verify"},
        {"criteria", criteria},
        {"all_passed", outcome.all_passed()},
        {"oracle_discrepancy_log", discrepancies_to_json(*outcome.report)}};
    write_json(fs::path(cfg.out_dir) / "verify_report.json", report);
    return outcome.all_passed() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"overdetermined annular Euler flows: dispersion relations, "
                 "bifurcation branches, stability solves"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string lambda_spec;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--problem", cfg.problem, "single | two | pair");
        sub->add_option("--lambda", lambda_spec,
                        "comma list or start:stop:step of inner radii");
        sub->add_option("--k", cfg.k_list, "mode indices")->delimiter(',');
        sub->add_option("--gamma", cfg.gamma, "vorticity (single/pair)");
        sub->add_option("--gamma1", cfg.gamma1, "core vorticity (two-phase)");
        sub->add_option("--gamma2", cfg.gamma2, "outer vorticity (two-phase)");
        sub->add_option("--modes", cfg.modes, "cosine truncation of unknowns");
        sub->add_option("--nr", cfg.nr, "radial collocation points");
        sub->add_option("--ntheta", cfg.ntheta, "angular grid (multiple of 4)");
        sub->add_option("--tol", cfg.tol, "newton tolerance");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--format", cfg.formats, "csv|json|svg")->delimiter(',');
    };

    auto* disp = app.add_subcommand("dispersion", "bifurcation-root tables");
    add_common(disp);
    auto* diag = app.add_subcommand("diagram",
                                    "bifurcation diagrams over the lambda grid");
    add_common(diag);
    auto* branch = app.add_subcommand("branch", "trace a bifurcation branch");
    add_common(branch);
    branch->add_option("--steps", cfg.steps, "number of continuation steps");
    branch->add_option("--ds", cfg.ds, "amplitude step");
    branch->add_option("--root-index", cfg.root_index,
                       "which bifurcation root (pair problem has two)");
    auto* stab = app.add_subcommand("stability",
                                    "solve the Neumann-perturbed problem");
    add_common(stab);
    stab->add_option("--rho-k", cfg.rho_k, "forced cosine mode");
    stab->add_option("--rho-amp", cfg.rho_amp, "forcing amplitude");
    stab->add_option("--rho-in-k", cfg.rho_in_k, "inner forcing mode (pair)");
    stab->add_option("--rho-in-amp", cfg.rho_in_amp,
                     "inner forcing amplitude (pair)");
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!lambda_spec.empty()) cfg.lambdas = parse_lambda_spec(lambda_spec);
        validate(cfg);
        if (disp->parsed()) return cmd_diagram(cfg, true);
        if (diag->parsed()) return cmd_diagram(cfg, false);
        if (branch->parsed()) return cmd_branch(cfg);
        if (stab->parsed()) return cmd_stability(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const GeometryError& e) {
        std::fprintf(stderr, "geometry error: %s\n", e.what());
        return 2;
    } catch (const DegenerateParameterError& e) {
        std::fprintf(stderr, "degenerate parameters: %s\n", e.what());
        return 3;
    } catch (const DivergenceError& e) {
        std::fprintf(stderr, "solver divergence: %s\n", e.what());
        return 3;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
