#ifndef ANNULAR_RADIAL_HPP
#define ANNULAR_RADIAL_HPP

namespace annular {

// Closed-form radially symmetric solutions on the standard annulus/disk and
// their boundary constants.
//
// Single phase (annulus lambda <= r <= 1, vorticity gamma):
//   psi(r) = C ln r - gamma (1 - r^2)/4,   C = (4 + (1-lambda^2) gamma)/(4 ln lambda),
// with psi(lambda) = 1, psi(1) = 0.
//
// Two phase (disk 0 <= r <= 1, vorticities gamma1 inside r < lambda, gamma2
// outside), continuous with continuous (1/Gamma) d_r Psi across r = lambda:
//   psi1(r) = -((1-lambda^2) gamma2 + (lambda^2 - r^2) gamma1)/4,
//   psi2(r) = -(1 - r^2) gamma2 / 4.
enum class ProfileKind { single_phase, two_phase };

struct RadialProfile {
    ProfileKind kind = ProfileKind::single_phase;
    double lambda = 0.5;
    double gamma1 = 0.0;  // single phase: the vorticity; two phase: core vorticity
    double gamma2 = 0.0;  // two phase only

    static RadialProfile single(double lambda, double gamma) {
        return {ProfileKind::single_phase, lambda, gamma, 0.0};
    }
    static RadialProfile two_phase(double lambda, double g1, double g2) {
        return {ProfileKind::two_phase, lambda, g1, g2};
    }
    double gamma_at(double r) const;  // vorticity on the subinterval containing r
};

// Stream function value; throws DomainError outside [lambda,1] (single) or
// [0,1] (two phase).
double trivial_stream(const RadialProfile& p, double r);
double trivial_stream_dr(const RadialProfile& p, double r);
double trivial_stream_drr(const RadialProfile& p, double r);

// Bernoulli constant |grad psi|^2 on the outer boundary of the trivial
// solution.
double bernoulli_constant(double lambda, double gamma);            // single phase
double bernoulli_constant_two_phase(double gamma2);                // gamma2^2/4

// Signed normal derivatives of the single-phase trivial solution, using the
// outward normals of the annulus: +e_r at r=1, -e_r at r=lambda.
struct NeumannConstants {
    double outer;  // d_nu psi at r=1   (= psi_r(1))
    double inner;  // d_nu psi at r=lambda with nu = -e_r (= -psi_r(lambda))
};
NeumannConstants neumann_constants(double lambda, double gamma);

}  // namespace annular

#endif
