#include "annular/dispersion.hpp"

#include <cmath>
#include <string>

#include "annular/errors.hpp"
#include "annular/radial.hpp"

namespace annular {

namespace {

constexpr int kMaxMode = 512;

void check_args(int k, double lambda) {
    if (k < 1 || k > kMaxMode)
        throw ConfigError("mode index must lie in [1," + std::to_string(kMaxMode) +
                          "], got " + std::to_string(k));
    if (!(lambda > 0.0 && lambda < 1.0))
        throw ConfigError("lambda must lie in (0,1), got " + std::to_string(lambda));
}

// X = 4 + gamma (1 - lambda^2 + 2 ln lambda)
double x_of(double lambda, double gamma) {
    return 4.0 + gamma * (1.0 - lambda * lambda + 2.0 * std::log(lambda));
}
// Y = 4 + gamma (1 - lambda^2 - 2 ln lambda)
double y_of(double lambda, double gamma) {
    return 4.0 + gamma * (1.0 - lambda * lambda - 2.0 * std::log(lambda));
}
// Xt = 4 + gamma (1 - lambda^2 + 2 lambda^2 ln lambda)
double xt_of(double lambda, double gamma) {
    return 4.0 + gamma * (1.0 - lambda * lambda +
                          2.0 * lambda * lambda * std::log(lambda));
}

}  // namespace

// --- single phase -----------------------------------------------------------

ModeCoeffsSingle harmonic_mode_single(int k, double lambda, double gamma) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double p2k = std::pow(lambda, 2 * k);
    double x = x_of(lambda, gamma);
    double denom = 4.0 * L * (1.0 - p2k);
    return {p2k * x / denom, -x / denom};
}

double dispersion_single(int k, double lambda, double gamma) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double p2k = std::pow(lambda, 2 * k);
    return -(k * x_of(lambda, gamma) * (1.0 + p2k) +
             y_of(lambda, gamma) * (1.0 - p2k)) /
           (4.0 * L * (1.0 - p2k));
}

double dispersion_single_via_modes(int k, double lambda, double gamma) {
    auto [A, B] = harmonic_mode_single(k, lambda, gamma);
    double L = std::log(lambda);
    // (-k A + k B) - ((4 + (1-lambda^2) gamma)/(4 ln lambda) - gamma/2)
    return (-k * A + k * B) -
           ((4.0 + (1.0 - lambda * lambda) * gamma) / (4.0 * L) - gamma / 2.0);
}

double mode_polynomial_single(int k, double lambda, double gamma) {
    check_args(k, lambda);
    double p2k = std::pow(lambda, 2 * k);
    return k * x_of(lambda, gamma) * (1.0 + p2k) +
           y_of(lambda, gamma) * (1.0 - p2k);
}

double bifurcation_gamma_single(int k, double lambda) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double l2 = lambda * lambda;
    double p2k = std::pow(lambda, 2 * k);
    double num = -4.0 * (k + k * p2k + 1.0 - p2k);
    double den = (1.0 - l2 + 2.0 * L) * (k + k * p2k) +
                 (1.0 - l2 - 2.0 * L) * (1.0 - p2k);
    return num / den;
}

double linearization_eigenvalue_single(int k, double lambda, double gamma) {
    return 2.0 * neumann_constants(lambda, gamma).outer *
           dispersion_single(k, lambda, gamma);
}

double transversality_single(double lambda) {
    double L = std::log(lambda);
    double l2 = lambda * lambda;
    double gs = bifurcation_gamma_single(1, lambda);
    // d/dgamma [2 q_out sigma_1] at gamma*, with sigma_1(gamma*) = 0:
    //   -(1 - l2 + 2 l2 ln l)(4 + gamma* (1 - l2 + 2 ln l)) / (4 ln^2 l (1 - l2))
    return -(1.0 - l2 + 2.0 * l2 * L) * x_of(lambda, gs) /
           (4.0 * L * L * (1.0 - l2));
}

// --- two phase ---------------------------------------------------------------

ModeCoeffsTwoPhase harmonic_mode_two_phase(int k, double lambda, double gamma1,
                                           double gamma2) {
    check_args(k, lambda);
    double p2k = std::pow(lambda, 2 * k);
    // denominator of Prop-style coefficients, scaled by lambda^{2k}
    double den = 2.0 * gamma2 * (1.0 - p2k) + 2.0 * gamma1 * (1.0 + p2k);
    if (std::abs(den) < 1e-300 * (std::abs(gamma1) + std::abs(gamma2) + 1.0) ||
        den == 0.0)
        throw DegenerateParameterError(
            "two-phase mode denominator vanishes at k=" + std::to_string(k), k);
    double num = gamma2 * gamma2 - gamma1 * gamma2;
    double E = p2k * num / den;
    double D = (1.0 - p2k) * num / den - gamma2 / 2.0;
    double F = -E - gamma2 / 2.0;
    return {D, E, F};
}

double dispersion_two_phase(int k, double lambda, double gamma1, double gamma2) {
    auto [D, E, F] = harmonic_mode_two_phase(k, lambda, gamma1, gamma2);
    (void)D;
    return (-k * E + k * F) + gamma2 / 2.0;
}

double dispersion_two_phase_closed(int k, double lambda, double gamma1,
                                   double gamma2) {
    check_args(k, lambda);
    double p2k = std::pow(lambda, 2 * k);
    double den = 2.0 * gamma2 * (1.0 - p2k) + 2.0 * gamma1 * (1.0 + p2k);
    if (den == 0.0)
        throw DegenerateParameterError(
            "two-phase mode denominator vanishes at k=" + std::to_string(k), k);
    return 2.0 * k * p2k * (gamma1 * gamma2 - gamma2 * gamma2) / den +
           (1.0 - k) * gamma2 / 2.0;
}

double bifurcation_gamma2_two_phase(int k, double lambda, double gamma1) {
    check_args(k, lambda);
    if (gamma1 == 0.0) throw ConfigError("gamma1 must be nonzero");
    double p2k = std::pow(lambda, 2 * k);
    double num = (1.0 - k) * (1.0 + p2k) + 2.0 * k * p2k;
    double den = (1.0 - k) * (1.0 - p2k) - 2.0 * k * p2k;
    return -num / den * gamma1;
}

double linearization_eigenvalue_two_phase(int k, double lambda, double gamma1,
                                          double gamma2) {
    return gamma2 * dispersion_two_phase(k, lambda, gamma1, gamma2);
}

double two_phase_root_residual(int k, double lambda, double gamma1) {
    check_args(k, lambda);
    double p2k = std::pow(lambda, 2 * k);
    // Sigma_k = gamma2 (a gamma2 + b) / (2 D(gamma2)) with
    //   a = -4 k p2k + 2 (1-k)(1 - p2k),
    //   b = gamma1 (4 k p2k + 2 (1-k)(1 + p2k)).
    double a = -4.0 * k * p2k + 2.0 * (1.0 - k) * (1.0 - p2k);
    double b = gamma1 * (4.0 * k * p2k + 2.0 * (1.0 - k) * (1.0 + p2k));
    double root = bifurcation_gamma2_two_phase(k, lambda, gamma1);
    double num = a * root + b;
    double scale = std::abs(a * root) + std::abs(b);
    return scale > 0.0 ? std::abs(num) / scale : std::abs(num);
}

double single_phase_root_residual(int k, double lambda) {
    check_args(k, lambda);
    double root = bifurcation_gamma_single(k, lambda);
    double val = mode_polynomial_single(k, lambda, root);
    double scale = std::abs(mode_polynomial_single(k, lambda, 0.0)) +
                   std::abs(root) *
                       std::abs(mode_polynomial_single(k, lambda, 1.0) -
                                mode_polynomial_single(k, lambda, 0.0));
    return scale > 0.0 ? std::abs(val) / scale : std::abs(val);
}

double transversality_two_phase(double gamma1, double lambda) {
    return -gamma1 * lambda * lambda / 2.0;
}

// --- pair problem ------------------------------------------------------------

ModeCoeffsPairInner harmonic_mode_pair_inner(int k, double lambda, double gamma) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double pk = std::pow(lambda, k);
    double p2k = pk * pk;
    // C = Xt / (4 lambda ln l (lambda^{-k} - lambda^k)), scaled by lambda^k
    double C = xt_of(lambda, gamma) * pk / (4.0 * lambda * L * (1.0 - p2k));
    return {C, -C};
}

double PairMatrix::det_scaled() const {
    double scale = std::abs(quad_a()) * gamma * gamma +
                   std::abs(quad_b()) * std::abs(gamma) + std::abs(quad_c());
    return scale > 0.0 ? det() / scale : det();
}

PairMatrix pair_matrix(int k, double lambda, double gamma) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double l2 = lambda * lambda;
    double pk = std::pow(lambda, k);
    double p2k = pk * pk;

    PairMatrix m;
    m.k = k;
    m.lambda = lambda;
    m.gamma = gamma;

    m.A1 = (-2.0 * k * L * (p2k + 1.0) - k * (1.0 - l2) * (p2k + 1.0) +
            (2.0 * L - 1.0 + l2) * (1.0 - p2k)) /
           (4.0 * L * (1.0 - p2k));
    m.A2 = (k * (p2k + 1.0) + 1.0 - p2k) / ((p2k - 1.0) * L);

    // lambda^k - lambda^{-k} = (p2k - 1)/pk
    m.B1 = pk * (2.0 * k * l2 * L + k * (1.0 - l2)) / (2.0 * lambda * L * (p2k - 1.0));
    m.B2 = 2.0 * k * pk / (lambda * L * (p2k - 1.0));

    m.C1 = k * (pk / lambda) * (2.0 * L + 1.0 - l2) / (2.0 * L * (p2k - 1.0));
    m.C2 = 2.0 * k * pk / (lambda * L * (p2k - 1.0));

    m.D1 = (2.0 * k * l2 * L * (1.0 + p2k) + k * (1.0 - l2) * (1.0 + p2k) +
            (2.0 * l2 * L - 1.0 + l2) * (p2k - 1.0)) /
           (4.0 * l2 * L * (p2k - 1.0));
    m.D2 = ((k - 1.0) * p2k + (k + 1.0)) / (l2 * L * (p2k - 1.0));

    m.A = m.A1 * gamma + m.A2;
    m.B = m.B1 * gamma + m.B2;
    m.C = m.C1 * gamma + m.C2;
    m.D = m.D1 * gamma + m.D2;
    return m;
}

PairMatrix pair_matrix_from_modes(int k, double lambda, double gamma) {
    check_args(k, lambda);
    auto [A_k, B_k] = harmonic_mode_single(k, lambda, gamma);
    auto [C_k, D_k] = harmonic_mode_pair_inner(k, lambda, gamma);
    auto prof = RadialProfile::single(lambda, gamma);
    double pk = std::pow(lambda, k);

    PairMatrix m = pair_matrix(k, lambda, gamma);  // carries the affine parts
    m.A = -k * A_k + k * B_k + trivial_stream_drr(prof, 1.0);
    m.B = -k * C_k + k * D_k;
    // entries at r=lambda: -k lambda^{-k-1} X + k lambda^{k-1} Y computed in
    // scaled form using lambda^{-k} Z = Z / pk
    m.C = (-k * A_k / pk + k * B_k * pk) / lambda;
    m.D = (-k * C_k / pk + k * D_k * pk) / lambda + trivial_stream_drr(prof, lambda);
    return m;
}

Eigen::Matrix2d pair_jacobian_geometric(int k, double lambda, double gamma) {
    PairMatrix m = pair_matrix(k, lambda, gamma);
    double psi_rr_in =
        trivial_stream_drr(RadialProfile::single(lambda, gamma), lambda);
    Eigen::Matrix2d g;
    g << m.A, -m.B, -m.C, m.D - 2.0 * psi_rr_in;
    return g;
}

double pair_det_reference_gamma0(int k, double lambda) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double pk = std::pow(lambda, k);
    double p2k = pk * pk;
    double p4k = p2k * p2k;
    double num = (k * k - 2.0 * k + 1.0) * p4k + 2.0 * (k * k - 1.0) * p2k +
                 (3.0 * k + 1.0);
    double den = lambda * lambda * L * L * (p2k - 1.0) * (p2k - 1.0);
    return num / den;
}

double pair_det_entries_gamma0(int k, double lambda) {
    check_args(k, lambda);
    double L = std::log(lambda);
    double pk = std::pow(lambda, k);
    double p2k = pk * pk;
    double p4k = p2k * p2k;
    double km1 = k - 1.0, kp1 = k + 1.0;
    double num = km1 * km1 * p4k - 2.0 * (k * k + 1.0) * p2k + kp1 * kp1;
    double den = lambda * lambda * L * L * (p2k - 1.0) * (p2k - 1.0);
    return num / den;
}

PairRoots pair_bifurcation_gammas(int k, double lambda) {
    PairMatrix m = pair_matrix(k, lambda, 0.0);
    double a = m.quad_a(), b = m.quad_b(), c = m.quad_c();
    PairRoots out;
    out.discriminant = b * b - 4.0 * a * c;
    if (out.discriminant < 0.0 || a == 0.0) {
        out.real = false;
        return out;
    }
    double sq = std::sqrt(out.discriminant);
    // stable quadratic roots
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : (-b - sq) / (2.0 * a);
    out.real = true;
    out.gamma_star = std::min(r1, r2);
    out.gamma_star2 = std::max(r1, r2);
    return out;
}

Eigen::Vector2d null_vector(const Eigen::Matrix2d& m) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullV);
    Eigen::Vector2d v = svd.matrixV().col(1);
    if (std::abs(v(0)) > 1e-14) v /= v(0);
    return v;
}

}  // namespace annular
