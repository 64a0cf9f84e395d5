#include <doctest.h>

#include <cmath>

#include "annular/continuation.hpp"
#include "annular/dispersion.hpp"
#include "annular/errors.hpp"
#include "annular/radial.hpp"

using namespace annular;

namespace {
NewtonOptions quick_newton() {
    NewtonOptions o;
    o.n_modes = 10;
    o.solver = SolverOptions{28, 40, 1e-6};
    return o;
}
}  // namespace

TEST_CASE("stability solve: zero perturbation keeps the trivial state") {
    auto res = newton_solve_G(0.5, 0.0, CosineSeries::zero(10), quick_newton());
    CHECK(res.eta.sup_norm() < 1e-12);
    CHECK(std::abs(res.bernoulli_correction) < 1e-12);
    CHECK(res.residual_sup < 1e-10);

    auto pres = newton_solve_calG(0.5, 0.0, CosineSeries::zero(10),
                                  CosineSeries::zero(10), quick_newton());
    CHECK(pres.eta.sup_norm() < 1e-12);
    CHECK(pres.xi.sup_norm() < 1e-12);
}

TEST_CASE("stability solve: first-order response in the forced mode") {
    auto opts = quick_newton();
    opts.tol = 1e-11;
    double lambda = 0.5, tau = 1e-3;

    // single phase at gamma = 0
    auto res = newton_solve_G(lambda, 0.0, CosineSeries::harmonic(2, tau), opts);
    double eig = linearization_eigenvalue_single(2, lambda, 0.0);
    CHECK(res.predicted.coeff(2) == doctest::Approx(tau / eig).epsilon(1e-12));
    CHECK(std::abs(res.eta.coeff(2) - tau / eig) < 1e-5 * tau);
    CHECK(res.max_dampings <= 2);

    // two phase at gamma1 = gamma2 = 1 (eigenvalue = Sigma_k there)
    auto res2 =
        newton_solve_H(lambda, 1.0, 1.0, CosineSeries::harmonic(2, tau), opts);
    double eig2 = linearization_eigenvalue_two_phase(2, lambda, 1.0, 1.0);
    CHECK(eig2 == doctest::Approx(dispersion_two_phase(2, lambda, 1.0, 1.0)));
    CHECK(res2.eta.coeff(2) ==
          doctest::Approx(tau / eig2).epsilon(2e-3));

    // pair problem at gamma = 0 against the geometric 2x2 inverse
    auto res3 = newton_solve_calG(lambda, 0.0, CosineSeries::harmonic(2, tau),
                                  CosineSeries::zero(10), opts);
    Eigen::Matrix2d m = pair_jacobian_geometric(2, lambda, 0.0);
    Eigen::Vector2d ab = m.partialPivLu().solve(Eigen::Vector2d(tau, 0.0));
    CHECK(res3.predicted_eta.coeff(2) == doctest::Approx(ab(0)).epsilon(1e-10));
    CHECK(res3.predicted_xi.coeff(2) == doctest::Approx(ab(1)).epsilon(1e-10));
    CHECK(res3.eta.coeff(2) == doctest::Approx(ab(0)).epsilon(1e-4));
    CHECK(res3.xi.coeff(2) == doctest::Approx(ab(1)).epsilon(1e-4));
}

TEST_CASE("stability solve: halving rho halves eta and quarters the defect") {
    auto opts = quick_newton();
    opts.tol = 1e-12;
    double lambda = 0.5;

    double amp = 4e-3;
    auto r1 = newton_solve_G(lambda, 0.0, CosineSeries::harmonic(2, amp), opts);
    auto r2 =
        newton_solve_G(lambda, 0.0, CosineSeries::harmonic(2, amp / 2.0), opts);
    double ratio_eta = r1.eta.coeff(2) / r2.eta.coeff(2);
    CHECK(ratio_eta > 1.9);
    CHECK(ratio_eta < 2.1);

    auto defect = [](const StabilityResult& r) {
        double d = 0.0;
        for (int k = 1; k <= r.eta.order(); ++k)
            d = std::max(d, std::abs(r.eta.coeff(k) - r.predicted.coeff(k)));
        return d;
    };
    double dr = defect(r1) / defect(r2);
    CHECK(dr > 3.5);
    CHECK(dr < 4.5);
}

TEST_CASE("stability solve: degeneracy is detected up front") {
    double lambda = 0.5;
    double gs = bifurcation_gamma_single(2, lambda);
    CHECK_THROWS_AS(newton_solve_G(lambda, gs + 1e-4,
                                   CosineSeries::harmonic(2, 1e-3), quick_newton()),
                    DegenerateParameterError);
    double g2s = bifurcation_gamma2_two_phase(2, lambda, 1.0);
    CHECK_THROWS_AS(newton_solve_H(lambda, 1.0, g2s + 1e-4,
                                   CosineSeries::harmonic(2, 1e-3), quick_newton()),
                    DegenerateParameterError);
}

TEST_CASE("detect_bifurcation matches the closed forms") {
    double lambda = 0.5;
    auto s = detect_bifurcation(ProblemKind::single_phase, 1, lambda);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == doctest::Approx(bifurcation_gamma_single(1, lambda))
                      .epsilon(1e-12));

    auto t = detect_bifurcation(ProblemKind::two_phase, 1, lambda, 2.5);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == doctest::Approx(2.5).epsilon(1e-14));

    auto p = detect_bifurcation(ProblemKind::pair, 1, lambda);
    REQUIRE(p.size() == 2);
    auto ref = pair_bifurcation_gammas(1, lambda);
    CHECK(p[0] == doctest::Approx(ref.gamma_star).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(ref.gamma_star2).epsilon(1e-12));

    // interval variant: bisection refines to the closed form
    auto b = detect_bifurcation_in(ProblemKind::single_phase, 1, lambda,
                                   s[0] - 0.5, s[0] + 0.5);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == doctest::Approx(s[0]).epsilon(1e-10));
    // no bracketing -> not-found report
    CHECK(detect_bifurcation_in(ProblemKind::single_phase, 1, lambda, s[0] + 1.0,
                                s[0] + 2.0)
              .empty());
}

TEST_CASE("branch tracing: single phase k0=1") {
    double lambda = 0.5;
    double g0 = detect_bifurcation(ProblemKind::single_phase, 1, lambda)[0];
    BranchOptions opts;
    opts.newton.n_modes = 10;
    opts.newton.solver = SolverOptions{28, 40, 1e-6};
    auto branch = trace_branch(ProblemKind::single_phase, 1, lambda, g0, 0.004, 5,
                               1.0, opts);
    REQUIRE(!branch.terminated_early);
    REQUIRE(branch.points.size() == 6);
    CHECK(branch.points[0].s == 0.0);
    CHECK(branch.points[0].gamma == doctest::Approx(g0).epsilon(1e-12));
    for (size_t i = 1; i < branch.points.size(); ++i) {
        const auto& p = branch.points[i];
        CHECK(p.residual_sup < 1e-9);
        CHECK(p.eta.coeff(1) == doctest::Approx(0.004 * i).epsilon(1e-14));
        CHECK(p.newton_iters <= 25);
    }
    // s column strictly monotone
    for (size_t i = 1; i < branch.points.size(); ++i)
        CHECK(branch.points[i].s > branch.points[i - 1].s);
    // gamma(s) - gamma* shrinks toward s = 0
    double d_far = std::abs(branch.points[5].gamma - g0);
    double d_near = std::abs(branch.points[1].gamma - g0);
    CHECK(d_near < d_far + 1e-12);

    auto rep = verify_branch_nontriviality(branch);
    CHECK(rep.ok);
    CHECK(rep.min_sup_ratio >= 0.9);
    // eta(s)/s approaches the unit kernel direction cos(theta)
    const auto& p1 = branch.points[1];
    CHECK(p1.eta.coeff(1) / p1.s == doctest::Approx(1.0).epsilon(1e-12));
    double off = 0.0;
    for (int k = 2; k <= p1.eta.order(); ++k)
        off = std::max(off, std::abs(p1.eta.coeff(k)));
    CHECK(off / p1.s < 0.05);
}

TEST_CASE("branch tracing: two-phase k0=2 and pair k0=1") {
    double lambda = 0.5, g1 = 1.0;
    BranchOptions opts;
    opts.newton.n_modes = 10;
    opts.newton.solver = SolverOptions{28, 40, 1e-6};

    double g20 = detect_bifurcation(ProblemKind::two_phase, 2, lambda, g1)[0];
    auto b2 = trace_branch(ProblemKind::two_phase, 2, lambda, g20, 0.004, 4, g1,
                           opts);
    REQUIRE(!b2.terminated_early);
    for (size_t i = 1; i < b2.points.size(); ++i)
        CHECK(b2.points[i].residual_sup < 1e-9);

    auto roots = detect_bifurcation(ProblemKind::pair, 1, lambda);
    auto bp = trace_branch(ProblemKind::pair, 1, lambda, roots[0], 0.004, 4, 1.0,
                           opts);
    REQUIRE(!bp.terminated_early);
    CHECK(bp.points[0].gamma == doctest::Approx(roots[0]).epsilon(1e-12));
    for (size_t i = 1; i < bp.points.size(); ++i) {
        CHECK(bp.points[i].residual_sup < 1e-9);
        // translation family: gamma may wander slightly along the exactly
        // degenerate direction but stays continuous near the root
        CHECK(std::abs(bp.points[i].gamma - roots[0]) < 1e-3);
    }
    auto rep = verify_branch_nontriviality(bp);
    auto kernel = null_vector(pair_matrix(1, lambda, roots[0]).matrix());
    CHECK(rep.kernel_ratio ==
          doctest::Approx(kernel(1) / kernel(0)).epsilon(1e-3));
}

TEST_CASE("pair stability at ||rho|| = 1e-4 matches the first-order map") {
    auto opts = quick_newton();
    opts.tol = 1e-11;
    double lambda = 0.5, tau = 1e-4;
    auto res = newton_solve_calG(lambda, 0.0, CosineSeries::harmonic(2, tau),
                                 CosineSeries::zero(10), opts);
    Eigen::Matrix2d m = pair_jacobian_geometric(2, lambda, 0.0);
    Eigen::Vector2d ab = m.partialPivLu().solve(Eigen::Vector2d(tau, 0.0));
    CHECK(std::abs(res.eta.coeff(2) - ab(0)) < 1e-4 * std::abs(ab(0)));
    CHECK(std::abs(res.xi.coeff(2) - ab(1)) < 1e-4 * std::abs(ab(1)));
}

TEST_CASE("newton divergence and branch termination are reported") {
    auto opts = quick_newton();
    opts.max_iters = 1;
    CHECK_THROWS_AS(newton_solve_G(0.5, 0.0, CosineSeries::harmonic(2, 5e-2),
                                   opts),
                    DivergenceError);

    BranchOptions bopts;
    bopts.newton = quick_newton();
    bopts.newton.max_iters = 2;
    bopts.max_halvings = 2;
    double g0 = detect_bifurcation(ProblemKind::single_phase, 1, 0.5)[0];
    auto b = trace_branch(ProblemKind::single_phase, 1, 0.5, g0, 0.05, 2, 1.0,
                          bopts);
    CHECK(b.terminated_early);
    CHECK(!b.termination_reason.empty());
}
