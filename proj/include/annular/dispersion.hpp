#ifndef ANNULAR_DISPERSION_HPP
#define ANNULAR_DISPERSION_HPP

#include <Eigen/Dense>
#include <vector>

namespace annular {

// Closed-form linearization data at the trivial radial states: harmonic mode
// coefficients of the shape-derivative fields, dispersion relations, their
// bifurcation roots, and the 2x2 linearized matrix of the two-free-boundary
// problem.
//
// Everything is written in terms of lambda^k and lambda^{2k} only (never
// lambda^{-k}), so mode indices up to several hundred evaluate without
// overflow; k is capped at 512.

// --- single phase -----------------------------------------------------------

// Coefficients of the mode-k harmonic field A r^{-k} + B r^{k} solving the
// shape-derivative problem with zero inner Dirichlet data and the outer data
// induced by a unit cos(k theta) boundary perturbation.
struct ModeCoeffsSingle {
    double A, B;
};
ModeCoeffsSingle harmonic_mode_single(int k, double lambda, double gamma);

// Dispersion value sigma_k: closed rational form, and the equivalent route
// assembled from the harmonic mode coefficients. The two agree to roundoff.
double dispersion_single(int k, double lambda, double gamma);
double dispersion_single_via_modes(int k, double lambda, double gamma);

// Affine-in-gamma numerator polynomial g_k whose unique root is the
// bifurcation vorticity.
double mode_polynomial_single(int k, double lambda, double gamma);
double bifurcation_gamma_single(int k, double lambda);

// Mode-k eigenvalue of the linearized squared-trace operator: 2 q_out sigma_k
// (signed trace convention).
double linearization_eigenvalue_single(int k, double lambda, double gamma);

// d/dgamma of the mode-1 eigenvalue at the bifurcation vorticity
// (transversality; negative for all lambda in (0,1)).
double transversality_single(double lambda);

// --- two phase --------------------------------------------------------------

// Mode-k coefficients of the transmission shape derivative: interior part
// D r^k, exterior part E r^{-k} + F r^k. Throws DegenerateParameterError when
// the shared denominator vanishes.
struct ModeCoeffsTwoPhase {
    double D, E, F;
};
ModeCoeffsTwoPhase harmonic_mode_two_phase(int k, double lambda, double gamma1,
                                           double gamma2);

double dispersion_two_phase(int k, double lambda, double gamma1, double gamma2);
// Same value through the rational closed form (h_k).
double dispersion_two_phase_closed(int k, double lambda, double gamma1,
                                   double gamma2);
// Bifurcation vorticity of the outer phase; linear in gamma1, equals gamma1
// at k=1.
double bifurcation_gamma2_two_phase(int k, double lambda, double gamma1);

// Scaled residual of the two-phase dispersion at its root. The dispersion
// factors as gamma2 N(gamma2) / (2 D(gamma2)) with N affine and D vanishing a
// distance O(lambda^{2k}) from the root, so the raw value at the
// double-precision root is amplified by the nearby pole at large k. This
// returns |N(root)| / (|slope * root| + |constant|), which measures the root
// itself.
double two_phase_root_residual(int k, double lambda, double gamma1);
// Analogous scaled residual of g_k at the single-phase root.
double single_phase_root_residual(int k, double lambda);

// Mode-k eigenvalue of the linearized squared-trace operator: gamma2 Sigma_k.
double linearization_eigenvalue_two_phase(int k, double lambda, double gamma1,
                                          double gamma2);

// Mixed derivative d/dgamma2 of the mode-1 eigenvalue at gamma2 = gamma1:
// -gamma1 lambda^2 / 2 exactly.
double transversality_two_phase(double gamma1, double lambda);

// --- pair problem (two free boundaries) -------------------------------------

// Inner-direction harmonic pair C r^{-k} + D r^{k} (vanishing on r=1) from
// the two-free-boundary linearization, in the orientation of the reference
// displays; C + D = 0.
struct ModeCoeffsPairInner {
    double C, D;
};
ModeCoeffsPairInner harmonic_mode_pair_inner(int k, double lambda, double gamma);

// 2x2 linearized matrix in the reference display form, with the affine
// decomposition of each entry in gamma.
struct PairMatrix {
    int k;
    double lambda, gamma;
    double A, B, C, D;
    double A1, A2, B1, B2, C1, C2, D1, D2;

    double det() const { return A * D - B * C; }
    // det as a quadratic a*gamma^2 + b*gamma + c.
    double quad_a() const { return A1 * D1 - B1 * C1; }
    double quad_b() const { return A1 * D2 + A2 * D1 - B1 * C2 - B2 * C1; }
    double quad_c() const { return A2 * D2 - B2 * C2; }
    double J() const { return -quad_b(); }
    // determinant divided by the evaluation scale of its quadratic expansion
    // (meaningful at roots, where whole rows may cancel).
    double det_scaled() const;
    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << A, B, C, D;
        return m;
    }
};
PairMatrix pair_matrix(int k, double lambda, double gamma);
// Dual route: assembled from the harmonic mode solves plus the radial second
// derivatives, instead of the combined rational displays.
PairMatrix pair_matrix_from_modes(int k, double lambda, double gamma);

// The Jacobian actually realized by the shape-derivative residual with the
// artifact's orientation conventions (xi > 0 moves the inner boundary
// outward; inner trace along the annulus-outward normal):
//   [ A  -B ; -C  D - 2 psi_rr(lambda) ].
// At k=1 this matrix annihilates the translation direction (1,1) for every
// gamma.
Eigen::Matrix2d pair_jacobian_geometric(int k, double lambda, double gamma);

// Reference closed-form display for det(M_{k,0}) (kept for comparison; it
// does not agree with the entry-assembled determinant -- see the
// oracle-discrepancy log of any verify run).
double pair_det_reference_gamma0(int k, double lambda);
// Entry-consistent closed form of det(M_{k,0}).
double pair_det_entries_gamma0(int k, double lambda);

// Roots of det(M_{k,gamma}) = 0 as a quadratic in gamma, ordered so that at
// k=1 gamma_star equals the single-phase bifurcation value (the smaller
// root).
struct PairRoots {
    bool real = false;
    double gamma_star = 0.0;   // smaller root when real
    double gamma_star2 = 0.0;  // larger root when real
    double discriminant = 0.0;
};
PairRoots pair_bifurcation_gammas(int k, double lambda);

// Unit null vector (alpha, beta) of a (near-)singular 2x2 matrix, normalized
// to alpha = 1 when possible.
Eigen::Vector2d null_vector(const Eigen::Matrix2d& m);

}  // namespace annular

#endif
