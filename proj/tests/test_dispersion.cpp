#include <doctest.h>

#include <cmath>
#include <random>

#include "annular/dispersion.hpp"
#include "annular/errors.hpp"
#include "annular/radial.hpp"
#include "oracles.hpp"

using namespace annular;

TEST_CASE("single-phase mode coefficients satisfy their boundary system") {
    for (int k : {1, 2, 5, 12}) {
        for (double lambda : {0.3, 0.5, 0.7}) {
            for (double gamma : {0.0, -6.0, 2.5}) {
                auto [A, B] = harmonic_mode_single(k, lambda, gamma);
                // homogeneous Dirichlet data on the inner circle
                CHECK(A * std::pow(lambda, -k) + B * std::pow(lambda, k) ==
                      doctest::Approx(0.0).epsilon(1e-12));
                // boundary value at r=1 equals -q_out
                double want = -gamma / 2.0 -
                              (4.0 + gamma * (1.0 - lambda * lambda)) /
                                  (4.0 * std::log(lambda));
                CHECK(A + B == doctest::Approx(want).epsilon(1e-13));
            }
        }
    }
    // direct 2x2 linear-solve oracle at (2, 0.5, -6)
    double q_out = neumann_constants(0.5, -6.0).outer;
    auto [Ao, Bo] = oracle::single_mode_system(2, 0.5, q_out);
    auto [A, B] = harmonic_mode_single(2, 0.5, -6.0);
    CHECK(A == doctest::Approx(Ao).epsilon(1e-12));
    CHECK(B == doctest::Approx(Bo).epsilon(1e-12));
}

TEST_CASE("dispersion value: path independence of the two formulas") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> ks(1, 40);
    std::uniform_real_distribution<double> ls(0.05, 0.95), gs(-20.0, 20.0);
    for (int rep = 0; rep < 1000; ++rep) {
        int k = ks(rng);
        double lambda = ls(rng), gamma = gs(rng);
        double a = dispersion_single(k, lambda, gamma);
        double b = dispersion_single_via_modes(k, lambda, gamma);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("dispersion at gamma=0: closed form and positivity") {
    for (int k = 1; k <= 100; ++k) {
        for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double p2k = std::pow(lambda, 2 * k);
            double want = ((1.0 - k) * p2k - k - 1.0) /
                          (std::log(lambda) * (1.0 - p2k));
            double got = dispersion_single(k, lambda, 0.0);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
            CHECK(got > 0.0);
        }
    }
}

TEST_CASE("single-phase bifurcation roots") {
    // sigma_k vanishes at the closed-form root
    for (int k : {1, 2, 3, 5, 10, 20, 100}) {
        for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            double g = bifurcation_gamma_single(k, lambda);
            CHECK(std::abs(dispersion_single(k, lambda, g)) < 1e-10);
            CHECK(std::abs(mode_polynomial_single(k, lambda, g)) < 1e-9);
        }
    }
    // k=1 explicit form, below -4 everywhere
    for (double lambda = 0.1; lambda < 0.95; lambda += 0.1) {
        double want = 4.0 / (lambda * lambda -
                             2.0 * lambda * lambda * std::log(lambda) - 1.0);
        double got = bifurcation_gamma_single(1, lambda);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got < -4.0);
    }
    // bisection oracle on the affine polynomial
    for (int k : {1, 2, 7}) {
        for (double lambda : {0.35, 0.6}) {
            double g = bifurcation_gamma_single(k, lambda);
            auto f = [&](double x) { return mode_polynomial_single(k, lambda, x); };
            double root = oracle::bisect(f, g - 1.0, g + 1.0);
            CHECK(root == doctest::Approx(g).epsilon(1e-10));
        }
    }
}

TEST_CASE("two-phase mode coefficients") {
    // E + F = -gamma2/2 over a parameter sweep
    for (int k : {1, 2, 3, 9}) {
        for (double lambda : {0.3, 0.6}) {
            for (double g1 : {1.0, -2.0}) {
                for (double g2 : {3.0, 0.7, -1.1}) {
                    auto [D, E, F] = harmonic_mode_two_phase(k, lambda, g1, g2);
                    (void)D;
                    CHECK(E + F == doctest::Approx(-g2 / 2.0).epsilon(1e-13));
                }
            }
        }
    }
    // gamma1 = gamma2: the jump degenerates
    auto [D, E, F] = harmonic_mode_two_phase(3, 0.5, 2.0, 2.0);
    CHECK(E == doctest::Approx(0.0));
    CHECK(F == doctest::Approx(-1.0));
    CHECK(D == doctest::Approx(-1.0));

    // transmission continuity and full 3x3 oracle at (2, 0.5, 1, 3)
    auto c = harmonic_mode_two_phase(2, 0.5, 1.0, 3.0);
    CHECK(c.D * std::pow(0.5, 2) ==
          doctest::Approx(c.E * std::pow(0.5, -2) + c.F * std::pow(0.5, 2))
              .epsilon(1e-13));
    Eigen::Vector3d o = oracle::two_phase_mode_system(2, 0.5, 1.0, 3.0);
    CHECK(c.D == doctest::Approx(o(0)).epsilon(1e-12));
    CHECK(c.E == doctest::Approx(o(1)).epsilon(1e-12));
    CHECK(c.F == doctest::Approx(o(2)).epsilon(1e-12));

    // vanishing denominator: 2 g2 (1-p) + 2 g1 (1+p) = 0
    double p = std::pow(0.5, 4);
    double g1 = 1.0;
    double g2 = -g1 * (1.0 + p) / (1.0 - p);
    CHECK_THROWS_AS(harmonic_mode_two_phase(2, 0.5, g1, g2),
                    DegenerateParameterError);
}

TEST_CASE("two-phase dispersion and bifurcation roots") {
    // the two routes agree
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ls(0.1, 0.9), gs(-4.0, 4.0);
    for (int rep = 0; rep < 200; ++rep) {
        int k = 1 + rep % 20;
        double lambda = ls(rng), g1 = gs(rng), g2 = gs(rng);
        if (std::abs(g1) < 0.1) continue;
        double via_modes, closed;
        try {
            via_modes = dispersion_two_phase(k, lambda, g1, g2);
            closed = dispersion_two_phase_closed(k, lambda, g1, g2);
        } catch (const DegenerateParameterError&) {
            continue;
        }
        CHECK(via_modes ==
              doctest::Approx(closed).epsilon(1e-11).scale(std::abs(via_modes) + 1));
    }

    // k=1 root is exactly gamma1; scaling is linear in gamma1
    for (double lambda : {0.2, 0.5, 0.8}) {
        for (double g1 : {-2.0, 1.0, 3.0}) {
            CHECK(bifurcation_gamma2_two_phase(1, lambda, g1) ==
                  doctest::Approx(g1).epsilon(1e-14));
        }
        CHECK(bifurcation_gamma2_two_phase(4, lambda, 2.5) ==
              doctest::Approx(2.5 * bifurcation_gamma2_two_phase(4, lambda, 1.0))
                  .epsilon(1e-14));
    }

    // the dispersion vanishes at the root: directly for small k, and through
    // the pole-free scaled residual up to k=100 (the rational form has a pole
    // a distance O(lambda^{2k}) from the root, which amplifies raw values)
    for (int k = 1; k <= 9; ++k) {
        for (double lambda : {0.1, 0.5, 0.9}) {
            // skip cells where the pole a distance O(lambda^{2k}) away makes
            // the raw evaluation meaningless in double precision
            if (std::pow(lambda, 2 * k) < 1e-4) continue;
            for (double g1 : {-2.0, 1.0, 3.0}) {
                double g2 = bifurcation_gamma2_two_phase(k, lambda, g1);
                CHECK(std::abs(dispersion_two_phase(k, lambda, g1, g2)) < 1e-9);
            }
        }
    }
    for (int k = 1; k <= 100; ++k) {
        for (double lambda : {0.1, 0.5, 0.9}) {
            for (double g1 : {-2.0, 1.0, 3.0}) {
                CHECK(two_phase_root_residual(k, lambda, g1) < 1e-13);
            }
        }
    }

    // root-finder oracle on Sigma_k, bracketing clear of the nearby pole of
    // the rational form
    for (int k : {2, 5}) {
        double lambda = 0.5, g1 = 1.0;
        double p2k = std::pow(lambda, 2 * k);
        double g2 = bifurcation_gamma2_two_phase(k, lambda, g1);
        double pole = -g1 * (1.0 + p2k) / (1.0 - p2k);
        double half = 0.3 * std::abs(g2 - pole);
        auto f = [&](double x) { return dispersion_two_phase(k, lambda, g1, x); };
        double root = oracle::bisect(f, g2 - half, g2 + half);
        CHECK(root == doctest::Approx(g2).epsilon(1e-9));
    }
}

TEST_CASE("pair matrix: displayed entries, dual route, affine structure") {
    for (int k : {1, 2, 3, 8}) {
        for (double lambda : {0.3, 0.5, 0.7}) {
            for (double gamma : {0.0, -6.0, 2.0}) {
                PairMatrix m = pair_matrix(k, lambda, gamma);
                PairMatrix via = pair_matrix_from_modes(k, lambda, gamma);
                double scale = std::abs(m.A) + std::abs(m.B) + std::abs(m.C) +
                               std::abs(m.D) + 1.0;
                CHECK(std::abs(m.A - via.A) < 1e-11 * scale);
                CHECK(std::abs(m.B - via.B) < 1e-11 * scale);
                CHECK(std::abs(m.C - via.C) < 1e-11 * scale);
                CHECK(std::abs(m.D - via.D) < 1e-11 * scale);

                // affine decomposition reproduces the entries
                CHECK(m.A == doctest::Approx(m.A1 * gamma + m.A2).epsilon(1e-12));
                CHECK(m.D == doctest::Approx(m.D1 * gamma + m.D2).epsilon(1e-12));
                // det equals its quadratic expansion
                double quad = m.quad_a() * gamma * gamma + m.quad_b() * gamma +
                              m.quad_c();
                CHECK(m.det() ==
                      doctest::Approx(quad).epsilon(1e-11).scale(std::abs(quad) + 1));
            }
        }
    }

    // the inner harmonic pair sums to zero
    for (int k : {1, 4, 20}) {
        auto [C, D] = harmonic_mode_pair_inner(k, 0.5, -3.0);
        CHECK(C + D == doctest::Approx(0.0));
    }

    // k=1 display: a = ((2 l^2 ln l + 1 - l^2) g + 4)/(2 ln l (l^2-1)), and the
    // first row repeats it (A = B identically at k=1)
    for (double lambda : {0.3, 0.5, 0.8}) {
        for (double gamma : {0.0, -5.0, 1.5}) {
            double L = std::log(lambda), l2 = lambda * lambda;
            double a_want =
                ((2.0 * l2 * L + 1.0 - l2) * gamma + 4.0) / (2.0 * L * (l2 - 1.0));
            PairMatrix m = pair_matrix(1, lambda, gamma);
            CHECK(m.A == doctest::Approx(a_want).epsilon(1e-12));
            CHECK(m.B == doctest::Approx(m.A).epsilon(1e-12));
            double c_want = ((2.0 * L + 1.0 - l2) * gamma + 4.0) /
                            (2.0 * L * (l2 - 1.0));
            CHECK(m.C == doctest::Approx(c_want).epsilon(1e-12));
        }
    }
}

TEST_CASE("pair determinant at gamma=0: positivity and reference-display gap") {
    for (int k = 1; k <= 20; ++k) {
        for (double lambda = 0.1; lambda < 0.95; lambda += 0.1) {
            PairMatrix m = pair_matrix(k, lambda, 0.0);
            CHECK(m.det() > 0.0);
            // entry-consistent closed form matches the assembled determinant
            CHECK(m.det() == doctest::Approx(pair_det_entries_gamma0(k, lambda))
                                 .epsilon(1e-10));
        }
    }
    // the reference display disagrees with the entries (logged by the verify
    // run); pin the two numbers at one cell so any change is noticed
    CHECK(pair_matrix(1, 0.5, 0.0).det() == doctest::Approx(44.402).epsilon(1e-3));
    CHECK(pair_det_reference_gamma0(1, 0.5) == doctest::Approx(59.203).epsilon(1e-3));
}

TEST_CASE("pair bifurcation roots and kernels") {
    // k=1 roots match the explicit displays
    for (double lambda : {0.3, 0.5, 0.7, 0.9}) {
        auto roots = pair_bifurcation_gammas(1, lambda);
        REQUIRE(roots.real);
        double l2 = lambda * lambda, L = std::log(lambda);
        double g_star = 4.0 / (l2 - 2.0 * l2 * L - 1.0);
        double g_star2 = (4.0 - 4.0 / l2) / (2.0 * l2 * L + 1.0 / l2 + l2 - 2.0 - 2.0 * L);
        CHECK(roots.gamma_star == doctest::Approx(g_star).epsilon(1e-10));
        CHECK(roots.gamma_star2 == doctest::Approx(g_star2).epsilon(1e-10));
        // first root coincides with the single-phase bifurcation value
        CHECK(roots.gamma_star ==
              doctest::Approx(bifurcation_gamma_single(1, lambda)).epsilon(1e-10));

        // scaled determinant vanishes at both roots
        CHECK(std::abs(pair_matrix(1, lambda, roots.gamma_star).det_scaled()) < 1e-9);
        CHECK(std::abs(pair_matrix(1, lambda, roots.gamma_star2).det_scaled()) < 1e-9);

        // kernel vectors: (1,1) at the first root, (1,-1) at the second
        auto v1 = null_vector(pair_matrix(1, lambda, roots.gamma_star).matrix());
        auto v2 = null_vector(pair_matrix(1, lambda, roots.gamma_star2).matrix());
        CHECK(v1(1) / v1(0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(v2(1) / v2(0) == doctest::Approx(-1.0).epsilon(1e-9));
    }
    // k >= 2: where the roots are real the determinant vanishes and the kernel
    // is nontrivial with distinct components
    for (int k : {2, 3, 5, 10, 20}) {
        for (double lambda : {0.2, 0.5, 0.8}) {
            auto roots = pair_bifurcation_gammas(k, lambda);
            if (!roots.real) continue;
            for (double g : {roots.gamma_star, roots.gamma_star2}) {
                PairMatrix m = pair_matrix(k, lambda, g);
                CHECK(std::abs(m.det_scaled()) < 1e-9);
                auto v = null_vector(m.matrix());
                CHECK(v.norm() > 0.5);
                CHECK(std::abs(v(1) - v(0)) > 1e-10 * v.norm());
            }
        }
    }
}

TEST_CASE("pair geometric Jacobian: translation identity at k=1") {
    // [A,-B;-C,D-2 psi_rr(lambda)] annihilates (1,1) for every gamma at k=1
    for (double lambda : {0.3, 0.5, 0.8}) {
        for (double gamma : {0.0, -9.0, 4.0}) {
            Eigen::Matrix2d g = pair_jacobian_geometric(1, lambda, gamma);
            Eigen::Vector2d t(1.0, 1.0);
            CHECK((g * t).cwiseAbs().maxCoeff() <
                  1e-11 * (g.cwiseAbs().maxCoeff() + 1.0));
        }
    }
    // and k >= 2 geometric determinants differ from the display-form ones
    CHECK(pair_jacobian_geometric(2, 0.5, 0.0).determinant() !=
          doctest::Approx(pair_matrix(2, 0.5, 0.0).det()).epsilon(1e-3));
}

TEST_CASE("large mode indices stay finite") {
    for (double lambda : {0.1, 0.9}) {
        CHECK(std::isfinite(dispersion_single(100, lambda, -5.0)));
        CHECK(std::isfinite(bifurcation_gamma_single(100, lambda)));
        CHECK(std::isfinite(bifurcation_gamma2_two_phase(100, lambda, 1.0)));
        PairMatrix m = pair_matrix(100, lambda, 0.0);
        CHECK(std::isfinite(m.det()));
        CHECK(std::isfinite(pair_matrix(512, lambda, 0.0).det()));
    }
    CHECK_THROWS_AS(dispersion_single(513, 0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(dispersion_single(0, 0.5, 0.0), ConfigError);
}

TEST_CASE("transversality closed forms") {
    // two-phase: -gamma1 lambda^2/2 from the derivative of the eigenvalue
    for (double lambda : {0.3, 0.5, 0.7}) {
        for (double g1 : {1.0, -2.0}) {
            double h = 1e-5;
            double up = linearization_eigenvalue_two_phase(1, lambda, g1, g1 + h);
            double dn = linearization_eigenvalue_two_phase(1, lambda, g1, g1 - h);
            double fd = (up - dn) / (2.0 * h);
            CHECK(transversality_two_phase(g1, lambda) ==
                  doctest::Approx(fd).epsilon(1e-8));
            CHECK(transversality_two_phase(g1, lambda) ==
                  doctest::Approx(-g1 * lambda * lambda / 2.0).epsilon(1e-14));
        }
    }
    // single-phase: derivative of 2 q_out sigma_1 at the bifurcation value,
    // negative for all lambda
    for (double lambda : {0.3, 0.5, 0.7}) {
        double gs = bifurcation_gamma_single(1, lambda);
        double h = 1e-5;
        double fd = (linearization_eigenvalue_single(1, lambda, gs + h) -
                     linearization_eigenvalue_single(1, lambda, gs - h)) /
                    (2.0 * h);
        CHECK(transversality_single(lambda) == doctest::Approx(fd).epsilon(1e-8));
        CHECK(transversality_single(lambda) < 0.0);
    }
    CHECK(transversality_single(0.5) == doctest::Approx(-2.885409).epsilon(1e-5));
}
