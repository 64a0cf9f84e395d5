#include "annular/verification.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "annular/continuation.hpp"
#include "annular/dispersion.hpp"
#include "annular/elliptic.hpp"
#include "annular/io.hpp"
#include "annular/radial.hpp"
#include "annular/shape.hpp"

namespace annular {

namespace {

const std::vector<double> kLambdaGrid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                         0.6, 0.7, 0.8, 0.9};
const std::vector<int> kFigureModes = {1, 2, 3, 5, 10, 20, 100};

struct Ctx {
    const VerifyOptions& opts;
    std::shared_ptr<RunReport> report;
    bool writing() const { return !opts.out_dir.empty(); }
    std::filesystem::path out(const std::string& name) const {
        return std::filesystem::path(opts.out_dir) / name;
    }
};

std::string cell(int k, double lambda) {
    std::ostringstream os;
    os << "(k=" << k << ", lambda=" << lambda << ")";
    return os.str();
}

// mode-m coefficient of a residual trace
double mode_of(const ResidualTrace& r, int m) { return r.modes.coeff(m); }

// Forward difference with one Richardson pass of the mode-k response of a
// residual operator in a single-mode boundary direction.
template <typename Op>
double richardson_mode_derivative(const Op& op, int k, double eps) {
    double base = op(0.0);
    double d1 = (op(eps) - base) / eps;
    double d2 = (op(eps / 2.0) - base) / (eps / 2.0);
    return 2.0 * d2 - d1;
    (void)k;
}

// --- criterion 1: single-phase dispersion roots ------------------------------

CriterionResult criterion1(Ctx& ctx) {
    CriterionResult c{1, "single-phase dispersion roots (Fig. 5 sweep)", true, ""};
    double worst_root_residual = 0.0;
    bool gamma1_ok = true;
    std::vector<std::string> positive_violations;
    CsvTable table;
    table.header = {"k", "lambda", "gamma_root", "residual"};

    for (int k : kFigureModes) {
        for (double lambda : kLambdaGrid) {
            double root = bifurcation_gamma_single(k, lambda);
            double res = std::abs(dispersion_single(k, lambda, root));
            worst_root_residual = std::max(worst_root_residual, res);
            table.rows.push_back({double(k), lambda, root, res});
            if (k == 1 && !(root < -4.0)) gamma1_ok = false;
            if (k >= 2 && !(root > 0.0)) {
                positive_violations.push_back(cell(k, lambda));
                ctx.report->add({"remark_1.2i_gamma_k_positive_range", double(k),
                                 lambda, root, 0.0, root, 1.0});
            }
        }
    }
    if (ctx.writing()) write_csv(ctx.out("fig5_single_phase_roots.csv"), table);

    bool res_ok = worst_root_residual < 1e-9;
    bool positive_ok = positive_violations.empty();
    c.passed = res_ok && gamma1_ok && positive_ok;
    std::ostringstream os;
    os << "max |sigma_k(root)| = " << worst_root_residual << " ("
       << (res_ok ? "ok" : "FAIL") << "); gamma_1* < -4 "
       << (gamma1_ok ? "ok" : "FAIL") << "; gamma_k* > 0 for k>=2 ";
    if (positive_ok) {
        os << "ok";
    } else {
        os << "FAIL at " << positive_violations.size()
           << " cells (the computed bifurcation values are negative there and "
              "agree with the bisection oracle; the positive-range claim does "
              "not hold on those cells), e.g. ";
        for (size_t i = 0; i < std::min<size_t>(4, positive_violations.size()); ++i)
            os << positive_violations[i] << " ";
    }
    c.detail = os.str();
    return c;
}

// --- criterion 2: gamma = 0 positivity ---------------------------------------

CriterionResult criterion2(Ctx& ctx) {
    CriterionResult c{2, "gamma=0 dispersion closed form and positivity", true, ""};
    double worst_rel = 0.0;
    bool positive = true;
    for (int k = 1; k <= 100; ++k) {
        for (double lambda : kLambdaGrid) {
            double p2k = std::pow(lambda, 2 * k);
            double want = ((1.0 - k) * p2k - k - 1.0) /
                              (std::log(lambda) * (1.0 - p2k)) +
                          ctx.opts.inject_dispersion_error;
            double got = dispersion_single(k, lambda, 0.0);
            worst_rel = std::max(worst_rel,
                                 std::abs(got - want) / std::abs(want));
            if (!(got > 0.0)) positive = false;
        }
    }
    c.passed = worst_rel < 1e-12 && positive;
    std::ostringstream os;
    os << "max relative deviation " << worst_rel << "; positivity "
       << (positive ? "ok" : "FAIL");
    c.detail = os.str();
    return c;
}

// --- criterion 3: two-phase roots --------------------------------------------

CriterionResult criterion3(Ctx& ctx) {
    CriterionResult c{3, "two-phase dispersion roots (Fig. 6 sweep)", true, ""};
    double worst_k1 = 0.0, worst_scaled = 0.0, worst_raw = 0.0;
    CsvTable table;
    table.header = {"k", "lambda", "gamma1", "gamma_root",
                    "gamma_root_over_gamma1", "residual"};
    for (double g1 : {-2.0, 1.0, 3.0}) {
        for (double lambda : kLambdaGrid) {
            double r1 = bifurcation_gamma2_two_phase(1, lambda, g1);
            worst_k1 = std::max(worst_k1, std::abs(r1 - g1) / std::abs(g1));
        }
    }
    for (int k = 1; k <= 100; ++k) {
        for (double lambda : kLambdaGrid) {
            double g1 = 1.0;
            double root = bifurcation_gamma2_two_phase(k, lambda, g1);
            double scaled = two_phase_root_residual(k, lambda, g1);
            worst_scaled = std::max(worst_scaled, scaled);
            // raw dispersion value where the nearby pole is resolvable
            if (std::pow(lambda, 2 * k) >= 1e-4)
                worst_raw = std::max(
                    worst_raw,
                    std::abs(dispersion_two_phase(k, lambda, g1, root)));
            bool figure_mode =
                std::find(kFigureModes.begin(), kFigureModes.end(), k) !=
                kFigureModes.end();
            if (figure_mode)
                table.rows.push_back(
                    {double(k), lambda, g1, root, root / g1, scaled});
        }
    }
    if (ctx.writing())
        write_csv(ctx.out("fig6_two_phase_roots_normalized.csv"), table);
    c.passed = worst_k1 < 1e-12 && worst_scaled < 1e-9 && worst_raw < 1e-9;
    std::ostringstream os;
    os << "max |gamma_21*/gamma1 - 1| = " << worst_k1
       << "; root residual (pole-free scaled form, all k<=100) = " << worst_scaled
       << "; raw |Sigma_k(root)| on conditioning-safe cells = " << worst_raw;
    c.detail = os.str();
    return c;
}

// --- criterion 4: pair-problem matrix ----------------------------------------

CriterionResult criterion4(Ctx& ctx) {
    CriterionResult c{4, "pair-problem matrix determinant and roots (Figs. 7-8)",
                      true, ""};
    bool det_positive = true;
    int display_mismatches = 0;
    double worst_det_at_root = 0.0, worst_k1_root = 0.0;
    for (int k = 1; k <= 20; ++k) {
        for (double lambda : kLambdaGrid) {
            PairMatrix m = pair_matrix(k, lambda, 0.0);
            if (!(m.det() > 0.0)) det_positive = false;
            double ref = pair_det_reference_gamma0(k, lambda);
            double rel = std::abs(m.det() - ref) / std::abs(m.det());
            if (rel > 1e-8) {
                ++display_mismatches;
                ctx.report->add({"corollary_1.7_det_reference_formula", double(k),
                                 lambda, 0.0, ref, m.det(), rel});
            }
        }
    }
    CsvTable table;
    table.header = {"k",            "lambda",       "real_roots", "gamma_root_1",
                    "gamma_root_2", "residual_1",   "residual_2"};
    for (int k : kFigureModes) {
        for (double lambda : kLambdaGrid) {
            auto roots = pair_bifurcation_gammas(k, lambda);
            double r1 = std::nan(""), r2 = std::nan(""), d1 = std::nan(""),
                   d2 = std::nan("");
            if (roots.real) {
                r1 = roots.gamma_star;
                r2 = roots.gamma_star2;
                d1 = std::abs(pair_matrix(k, lambda, r1).det_scaled());
                d2 = std::abs(pair_matrix(k, lambda, r2).det_scaled());
                if (k <= 20) {
                    worst_det_at_root = std::max(worst_det_at_root, d1);
                    worst_det_at_root = std::max(worst_det_at_root, d2);
                }
            }
            table.rows.push_back(
                {double(k), lambda, roots.real ? 1.0 : 0.0, r1, r2, d1, d2});
        }
    }
    if (ctx.writing()) write_csv(ctx.out("fig7_fig8_pair_roots.csv"), table);

    for (double lambda : kLambdaGrid) {
        auto roots = pair_bifurcation_gammas(1, lambda);
        double l2 = lambda * lambda, L = std::log(lambda);
        double want1 = 4.0 / (l2 - 2.0 * l2 * L - 1.0);
        double want2 =
            (4.0 - 4.0 / l2) / (2.0 * l2 * L + 1.0 / l2 + l2 - 2.0 - 2.0 * L);
        worst_k1_root = std::max(
            worst_k1_root, std::abs(roots.gamma_star - want1) / std::abs(want1));
        worst_k1_root = std::max(
            worst_k1_root,
            std::abs(roots.gamma_star2 - want2) / std::abs(want2));
    }

    c.passed = det_positive && worst_det_at_root < 1e-8 && worst_k1_root < 1e-10;
    std::ostringstream os;
    os << "det(M_k0) > 0 " << (det_positive ? "ok" : "FAIL") << "; "
       << display_mismatches
       << " cells differ from the reference det display beyond 1e-8 and are "
          "logged (entry-assembled determinant authoritative); max scaled |det| "
          "at roots = "
       << worst_det_at_root << "; k=1 roots vs explicit displays rel "
       << worst_k1_root;
    c.detail = os.str();
    return c;
}

// --- criterion 5: solver fidelity --------------------------------------------

CriterionResult criterion5(Ctx&) {
    CriterionResult c{5, "spectral solver fidelity on the trivial states", true,
                      ""};
    SolverOptions defaults{};  // 48 radial points, 128 angular, K = 32
    double lambda = 0.5;
    double worst = 0.0;
    for (double gamma : {0.0, -6.0, bifurcation_gamma_single(1, 0.5)}) {
        auto sol =
            solve_dirichlet(AnnulusGeometry::unperturbed(lambda), gamma, defaults);
        auto prof = RadialProfile::single(lambda, gamma);
        const auto& map = sol.map();
        for (int i = 0; i < map.n_radial(); ++i)
            for (int j = 0; j < map.n_theta(); ++j)
                worst = std::max(worst, std::abs(sol.values()(i, j) -
                                                 trivial_stream(prof, map.r()(i, j))));
        auto q = neumann_constants(lambda, gamma);
        for (double v : sol.outer_trace(defaults.n_angular))
            worst = std::max(worst, std::abs(v - q.outer));
        for (double v : sol.inner_trace(defaults.n_angular))
            worst = std::max(worst, std::abs(v - q.inner));
    }
    for (auto [g1, g2] : {std::pair{1.0, 1.0}, std::pair{1.0, 3.0}}) {
        auto sol = solve_transmission(AnnulusGeometry::unperturbed(lambda), g1, g2,
                                      defaults);
        auto prof = RadialProfile::two_phase(lambda, g1, g2);
        const auto& map = sol.map();
        for (int i = 0; i < map.n_radial(); ++i)
            for (int j = 0; j < map.n_theta(); ++j)
                worst = std::max(worst, std::abs(sol.values()(i, j) -
                                                 trivial_stream(prof, map.r()(i, j))));
        for (double r : {0.0, 0.12, 0.26, 0.41})
            worst = std::max(worst, std::abs(sol.eval(r, 0.37) -
                                             trivial_stream(prof, r)));
        for (double v : sol.outer_trace(defaults.n_angular))
            worst = std::max(worst, std::abs(v - g2 / 2.0));
    }
    c.passed = worst < 1e-10;
    c.detail = "max sup-norm deviation from the closed forms = " +
               format_double(worst) + " at default resolution";
    return c;
}

// --- criterion 6: linearization oracles --------------------------------------

CriterionResult criterion6(Ctx& ctx) {
    CriterionResult c{6, "FD linearizations match the dispersion closed forms",
                      true, ""};
    SolverOptions opts{40, 48, 1e-6};
    const double eps = 1e-5;
    double worst = 0.0;
    std::string worst_case;

    auto track = [&](double fd, double want, const std::string& label) {
        double rel = std::abs(fd - want) / std::max(1e-30, std::abs(want));
        if (rel > worst) {
            worst = rel;
            worst_case = label;
        }
    };

    for (int k : {1, 2, 3}) {
        for (double lambda : {0.3, 0.5, 0.7}) {
            for (double gamma : {0.0, -6.0}) {
                auto op = [&](double t) {
                    if (t == 0.0) return 0.0;  // G(gamma, 0) = 0 analytically
                    AnnulusGeometry g(lambda, CosineSeries::harmonic(k, t),
                                      CosineSeries());
                    return mode_of(residual_G(g, gamma, opts), k);
                };
                double fd = richardson_mode_derivative(op, k, eps);
                double want = linearization_eigenvalue_single(k, lambda, gamma);
                track(fd, want, "G " + cell(k, lambda));
                // the reference display writes the prefactor as 2 sqrt(Q);
                // with the signed trace it is 2 q_out (negative here)
                if (k == 1 && gamma == 0.0) {
                    double unsigned_want =
                        2.0 * std::sqrt(bernoulli_constant(lambda, gamma)) *
                        dispersion_single(k, lambda, gamma);
                    ctx.report->add({"eq_3.18_prefactor_signed_trace", double(k),
                                     lambda, gamma, unsigned_want, fd,
                                     std::abs(fd - unsigned_want) /
                                         std::abs(unsigned_want)});
                }
            }
            {  // two-phase at (gamma1, gamma2) = (1, 3)
                auto op = [&](double t) {
                    if (t == 0.0) return 0.0;
                    AnnulusGeometry g(lambda, CosineSeries::harmonic(k, t),
                                      CosineSeries());
                    return mode_of(residual_H(g, 1.0, 3.0, opts), k);
                };
                double fd = richardson_mode_derivative(op, k, eps);
                track(fd, linearization_eigenvalue_two_phase(k, lambda, 1.0, 3.0),
                      "H " + cell(k, lambda));
            }
            {  // pair columns at gamma = -6
                double gamma = -6.0;
                Eigen::Matrix2d m = pair_jacobian_geometric(k, lambda, gamma);
                PairMatrix disp = pair_matrix(k, lambda, gamma);
                auto col = [&](bool outer_dir, int row) {
                    auto op = [&](double t) {
                        if (t == 0.0) return 0.0;
                        CosineSeries e =
                            outer_dir ? CosineSeries::harmonic(k, t) : CosineSeries();
                        CosineSeries x =
                            outer_dir ? CosineSeries() : CosineSeries::harmonic(k, t);
                        auto [ro, ri] =
                            residual_calG(AnnulusGeometry(lambda, e, x), gamma, opts);
                        return mode_of(row == 0 ? ro : ri, k);
                    };
                    return richardson_mode_derivative(op, k, eps);
                };
                double fd00 = col(true, 0), fd10 = col(true, 1);
                double fd01 = col(false, 0), fd11 = col(false, 1);
                track(fd00, m(0, 0), "calG11 " + cell(k, lambda));
                track(fd10, m(1, 0), "calG21 " + cell(k, lambda));
                track(fd01, m(0, 1), "calG12 " + cell(k, lambda));
                track(fd11, m(1, 1), "calG22 " + cell(k, lambda));
                // displayed-matrix entries that disagree with the realized
                // Jacobian go to the discrepancy log (orientation and the
                // inner moving-boundary term)
                auto log_disp = [&](double fd, double ref, const char* which) {
                    double rel = std::abs(fd - ref) / std::max(1.0, std::abs(ref));
                    if (rel > 1e-5)
                        ctx.report->add({std::string("eq_5.16_display_entry_") +
                                             which,
                                         double(k), lambda, gamma, ref, fd, rel});
                };
                log_disp(fd00, disp.A, "11");
                log_disp(fd01, disp.B, "12");
                log_disp(fd10, disp.C, "21");
                log_disp(fd11, disp.D, "22");
            }
        }
    }
    c.passed = worst <= 1e-5;
    c.detail = "max relative error " + format_double(worst) + " at " + worst_case +
               "; pair columns verified against the orientation-consistent "
               "matrix, display differences logged";
    return c;
}

// --- criterion 7: shape-derivative convergence --------------------------------

CriterionResult criterion7(Ctx&) {
    CriterionResult c{7, "shape-derivative finite differences converge at O(t)",
                      true, ""};
    SolverOptions opts{40, 32, 1e-6};
    double lambda = 0.5;
    struct Case {
        ProblemKind kind;
        int k;
        double g1, g2;
        PerturbationSide side;
        const char* label;
    };
    std::vector<Case> cases = {
        {ProblemKind::single_phase, 1, -6.0, 0.0, PerturbationSide::outer,
         "single k=1"},
        {ProblemKind::single_phase, 2, 0.0, 0.0, PerturbationSide::outer,
         "single k=2"},
        {ProblemKind::two_phase, 1, 1.0, 3.0, PerturbationSide::outer,
         "two-phase k=1"},
        {ProblemKind::pair, 1, -6.0, 0.0, PerturbationSide::inner,
         "pair inner k=1"},
    };
    std::ostringstream os;
    bool ok = true;
    for (const auto& cs : cases) {
        auto closed = shape_derivative_closed(cs.kind, cs.k, lambda, cs.g1, cs.g2,
                                              cs.side);
        auto err_at = [&](double t) {
            CosineSeries eta0 = cs.side == PerturbationSide::outer
                                    ? CosineSeries::harmonic(cs.k, 1.0)
                                    : CosineSeries();
            CosineSeries xi0 = cs.side == PerturbationSide::inner
                                   ? CosineSeries::harmonic(cs.k, 1.0)
                                   : CosineSeries();
            auto f = shape_derivative_fd(cs.kind, lambda, cs.g1, cs.g2, eta0, xi0,
                                         t, opts);
            return shape_derivative_error(f, closed, cs.k, lambda, cs.kind, opts);
        };
        double e4 = err_at(4e-5), e2 = err_at(2e-5), e1 = err_at(1e-5);
        double r1 = e4 / e2, r2 = e2 / e1;
        bool case_ok = r1 > 1.8 && r1 < 2.2 && r2 > 1.8 && r2 < 2.2 && e1 < 1e-3;
        ok = ok && case_ok;
        os << cs.label << ": ratios " << format_double(r1) << ", "
           << format_double(r2) << ", e(1e-5) = " << format_double(e1) << "; ";
    }
    c.passed = ok;
    c.detail = os.str();
    return c;
}

// --- criterion 8: transversality ----------------------------------------------

CriterionResult criterion8(Ctx& ctx) {
    CriterionResult c{8, "transversality of the bifurcations", true, ""};
    SolverOptions opts{48, 32, 1e-6};
    double lambda = 0.5;
    const double eps = 1e-4;

    // central-difference mode-1 linearization of H in gamma2
    auto lin_H = [&](double g2) {
        AnnulusGeometry gp(lambda, CosineSeries::harmonic(1, eps), CosineSeries());
        AnnulusGeometry gm(lambda, CosineSeries::harmonic(1, -eps), CosineSeries());
        double rp = mode_of(residual_H(gp, 1.0, g2, opts), 1);
        double rm = mode_of(residual_H(gm, 1.0, g2, opts), 1);
        return (rp - rm) / (2.0 * eps);
    };
    double h = 5e-3;
    double fd_two = (lin_H(1.0 + h) - lin_H(1.0 - h)) / (2.0 * h);
    double want_two = transversality_two_phase(1.0, lambda);  // -gamma1 l^2/2
    double rel_two = std::abs(fd_two - want_two) / std::abs(want_two);

    // single phase at the k=1 bifurcation value
    double gs = bifurcation_gamma_single(1, lambda);
    auto lin_G = [&](double g) {
        AnnulusGeometry gp(lambda, CosineSeries::harmonic(1, eps), CosineSeries());
        AnnulusGeometry gm(lambda, CosineSeries::harmonic(1, -eps), CosineSeries());
        double rp = mode_of(residual_G(gp, g, opts), 1);
        double rm = mode_of(residual_G(gm, g, opts), 1);
        return (rp - rm) / (2.0 * eps);
    };
    double hg = 5e-3 * std::abs(gs);
    double fd_single = (lin_G(gs + hg) - lin_G(gs - hg)) / (2.0 * hg);
    double want_single = transversality_single(lambda);
    double rel_single = std::abs(fd_single - want_single) / std::abs(want_single);

    // the reference display for the single-phase mixed derivative carries an
    // algebra slip and the unsigned prefactor; log it against the FD value
    double l2 = lambda * lambda, L = std::log(lambda);
    double display = l2 * (-2.0 * L - 1.0 + l2) *
                     (4.0 + (1.0 - l2 + 2.0 * L) * gs) /
                     (4.0 * L * L * (1.0 - l2));
    ctx.report->add({"eq_3.15_transversality_display", 1.0, lambda, gs, display,
                     fd_single,
                     std::abs(fd_single - display) / std::abs(display)});

    c.passed = rel_two < 1e-4 && rel_single < 1e-3 && fd_single < 0.0;
    std::ostringstream os;
    os << "two-phase mixed derivative rel error " << format_double(rel_two)
       << " vs -gamma1 lambda^2/2; single-phase mixed derivative "
       << format_double(fd_single) << " (nonzero, negative with the signed "
       << "trace convention, matches the corrected closed form to rel "
       << format_double(rel_single) << "; display value logged)";
    c.detail = os.str();
    return c;
}

// --- criterion 9: branch tracing ----------------------------------------------

CriterionResult criterion9(Ctx& ctx) {
    CriterionResult c{9, "bifurcation branches at lambda=0.5, k0=1", true, ""};
    double lambda = 0.5;
    BranchOptions bopts;
    bopts.newton.n_modes = 16;
    bopts.newton.solver = SolverOptions{33, 64, 1e-6};

    std::ostringstream os;
    bool ok = true;

    auto run_one = [&](ProblemKind kind, double gamma0, double g1,
                       const char* label) {
        Branch b = trace_branch(kind, 1, lambda, gamma0, 0.002, 20, g1, bopts);
        double max_res = 0.0;
        for (size_t i = 1; i < b.points.size(); ++i)
            max_res = std::max(max_res, b.points[i].residual_sup);
        auto rep = verify_branch_nontriviality(b);
        bool branch_ok = !b.terminated_early && b.points.size() == 21 &&
                         max_res < 1e-9 &&
                         std::abs(b.points[0].gamma - gamma0) < 1e-6 &&
                         rep.offmode_energy_ratio > 3.5 &&
                         rep.offmode_energy_ratio < 4.5;
        ok = ok && branch_ok;
        os << label << ": max residual " << format_double(max_res)
           << ", off-mode energy ratio " << format_double(rep.offmode_energy_ratio)
           << (branch_ok ? " ok; " : " FAIL; ");
        if (ctx.writing()) {
            CsvTable t;
            t.header = {"step", "s", "gamma", "residual_sup"};
            for (int m = 1; m <= b.mode_truncation; ++m)
                t.header.push_back("eta_" + std::to_string(m));
            if (kind == ProblemKind::pair)
                for (int m = 1; m <= b.mode_truncation; ++m)
                    t.header.push_back("xi_" + std::to_string(m));
            for (size_t i = 0; i < b.points.size(); ++i) {
                const auto& p = b.points[i];
                std::vector<double> row = {double(i), p.s, p.gamma,
                                           p.residual_sup};
                for (int m = 1; m <= b.mode_truncation; ++m)
                    row.push_back(p.eta.coeff(m));
                if (kind == ProblemKind::pair)
                    for (int m = 1; m <= b.mode_truncation; ++m)
                        row.push_back(p.xi.coeff(m));
                t.rows.push_back(row);
            }
            write_csv(ctx.out(std::string("branch_") + label + ".csv"), t);
        }
        return b;
    };

    run_one(ProblemKind::single_phase,
            detect_bifurcation(ProblemKind::single_phase, 1, lambda)[0], 1.0,
            "single");
    run_one(ProblemKind::two_phase,
            detect_bifurcation(ProblemKind::two_phase, 1, lambda, 1.0)[0], 1.0,
            "two_phase");

    auto pair_roots = detect_bifurcation(ProblemKind::pair, 1, lambda);
    Branch bp = run_one(ProblemKind::pair, pair_roots[0], 1.0, "pair");
    auto rep = verify_branch_nontriviality(bp);
    auto kernel = null_vector(pair_matrix(1, lambda, pair_roots[0]).matrix());
    double want_ratio = kernel(1) / kernel(0);
    double rel = std::abs(rep.kernel_ratio - want_ratio) / std::abs(want_ratio);
    bool kernel_ok = rel < 1e-3;
    ok = ok && kernel_ok;
    os << "pair kernel ratio " << format_double(rep.kernel_ratio)
       << " vs null vector " << format_double(want_ratio) << " (rel "
       << format_double(rel) << (kernel_ok ? ") ok" : ") FAIL");

    c.passed = ok;
    c.detail = os.str();
    return c;
}

// --- criterion 10: stability solves -------------------------------------------

CriterionResult criterion10(Ctx&) {
    CriterionResult c{10, "implicit-function stability solves", true, ""};
    double lambda = 0.5, tau = 1e-3;
    NewtonOptions nopts;
    nopts.tol = 5e-11;
    nopts.n_modes = 16;
    nopts.solver = SolverOptions{33, 64, 1e-6};

    std::ostringstream os;
    bool ok = true;

    // The asymptotics are stated against the perturbation's Y-norm
    // (C^{1,alpha}); the computable C^1 norm of tau cos(2 theta) is 3 tau.
    CosineSeries rho = CosineSeries::harmonic(2, tau);
    double rho_y = 0.0;
    for (int j = 0; j < 512; ++j) {
        double th = 2.0 * std::numbers::pi * j / 512;
        rho_y = std::max(rho_y, std::abs(rho(th)) + std::abs(rho.deriv(th)));
    }
    const double bound = 1e-5 * rho_y;

    // single phase at gamma = 0
    auto rs = newton_solve_G(lambda, 0.0, rho, nopts);
    double defect_single =
        std::abs(rs.eta.coeff(2) - rs.predicted.coeff(2));
    bool single_ok = defect_single <= bound;
    ok = ok && single_ok;
    os << "single: |eta_2 - tau/(2 q_out sigma_2)| = "
       << format_double(defect_single) << (single_ok ? " ok; " : " FAIL; ");

    // two phase at gamma1 = gamma2 = 1 (prefactor is exactly 1 there); the
    // forced-mode defect is third order (parity sends the quadratic
    // self-interaction to modes 0 and 4) with a constant near 20
    auto rt = newton_solve_H(lambda, 1.0, 1.0, rho, nopts);
    double defect_two = std::abs(rt.eta.coeff(2) - rt.predicted.coeff(2));
    bool two_ok = defect_two <= bound;
    ok = ok && two_ok;
    os << "two-phase: |eta_2 - tau/Sigma_2| = " << format_double(defect_two)
       << " vs 1e-5*||rho||_Y = " << format_double(bound)
       << (two_ok ? " ok; " : " FAIL; ");

    // pair problem at gamma = 0
    auto rp = newton_solve_calG(lambda, 0.0, CosineSeries::harmonic(2, tau),
                                CosineSeries::zero(16), nopts);
    double rel_eta = std::abs(rp.eta.coeff(2) - rp.predicted_eta.coeff(2)) /
                     std::abs(rp.predicted_eta.coeff(2));
    double rel_xi = std::abs(rp.xi.coeff(2) - rp.predicted_xi.coeff(2)) /
                    std::abs(rp.predicted_xi.coeff(2));
    bool pair_ok = rel_eta < 1e-4 && rel_xi < 1e-4;
    ok = ok && pair_ok;
    os << "pair: rel defect (eta, xi) = (" << format_double(rel_eta) << ", "
       << format_double(rel_xi) << ")" << (pair_ok ? " ok; " : " FAIL; ");

    // halving the perturbation shrinks the first-order defect quadratically
    auto defect_of = [](const StabilityResult& r) {
        double d = 0.0;
        for (int k = 1; k <= r.eta.order(); ++k)
            d = std::max(d, std::abs(r.eta.coeff(k) - r.predicted.coeff(k)));
        return d;
    };
    auto rbig =
        newton_solve_G(lambda, 0.0, CosineSeries::harmonic(2, 2.0 * tau), nopts);
    double ratio = defect_of(rbig) / defect_of(rs);
    bool quad_ok = ratio > 3.5 && ratio < 4.5;
    ok = ok && quad_ok;
    os << "defect halving ratio " << format_double(ratio)
       << (quad_ok ? " ok" : " FAIL");

    c.passed = ok;
    c.detail = os.str();
    return c;
}

// --- criterion 11: rigidity consistency ----------------------------------------

CriterionResult criterion11(Ctx&) {
    CriterionResult c{11, "curvature rigidity identity", true, ""};
    double lambda = 0.5, g1 = 1.0, g2 = 3.0;
    SolverOptions defaults{};

    auto sol = solve_transmission(AnnulusGeometry::unperturbed(lambda), g1, g2,
                                  defaults);
    auto dec = curvature_decomposition(sol);
    double h_dev = 0.0, nn_min = 1e300, nn_max = -1e300;
    for (size_t j = 0; j < dec.mean_curvature.size(); ++j) {
        h_dev = std::max(h_dev, std::abs(dec.mean_curvature[j] - 1.0));
        nn_min = std::min(nn_min, dec.normal_normal[j]);
        nn_max = std::max(nn_max, dec.normal_normal[j]);
    }
    bool trivial_ok = h_dev < 1e-8 && (nn_max - nn_min) < 1e-8;

    // nontrivial branch point at s = 0.05: trace the genuinely non-circular
    // two-phase k0=2 branch (the k0=1 family consists of congruent domains)
    BranchOptions bopts;
    bopts.newton.n_modes = 16;
    bopts.newton.solver = SolverOptions{33, 64, 1e-6};
    double g20 = detect_bifurcation(ProblemKind::two_phase, 2, lambda, g1)[0];
    Branch b = trace_branch(ProblemKind::two_phase, 2, lambda, g20, 0.002, 25, g1,
                            bopts);
    bool branch_ok = !b.terminated_early && b.points.size() == 26;
    double variation = 0.0;
    if (branch_ok) {
        const auto& p = b.points.back();
        AnnulusGeometry geom(lambda, p.eta, CosineSeries());
        auto sol2 = solve_transmission(geom, g1, p.gamma, bopts.newton.solver);
        auto dec2 = curvature_decomposition(sol2);
        double mn = 1e300, mx = -1e300;
        for (double v : dec2.normal_normal) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        variation = mx - mn;
    }
    bool variation_ok = branch_ok && variation > 1e-4;

    c.passed = trivial_ok && variation_ok;
    std::ostringstream os;
    os << "trivial: |H-1| <= " << format_double(h_dev) << ", d_nn psi variation "
       << format_double(nn_max - nn_min) << "; branch point s=0.05: d_nn psi "
       << "variation " << format_double(variation) << " (" << (variation_ok
       ? "nontrivial domains fail the extra overdetermination" : "FAIL") << ")";
    c.detail = os.str();
    return c;
}

}  // namespace

std::string format_criterion_line(const CriterionResult& c) {
    std::ostringstream os;
    os << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name
       << " -- " << c.detail;
    return os.str();
}

VerifyOutcome run_acceptance(const VerifyOptions& opts) {
    VerifyOutcome out;
    out.report = std::make_shared<RunReport>();
    Ctx ctx{opts, out.report};
    if (!opts.out_dir.empty())
        std::filesystem::create_directories(opts.out_dir);

    using CriterionFn = CriterionResult (*)(Ctx&);
    const CriterionFn fns[] = {criterion1, criterion2, criterion3, criterion4,
                               criterion5, criterion6, criterion7, criterion8,
                               criterion9, criterion10, criterion11};
    for (int i = 0; i < 11; ++i) {
        if (opts.only_criterion != 0 && opts.only_criterion != i + 1) continue;
        out.criteria.push_back(fns[i](ctx));
    }
    return out;
}

}  // namespace annular
