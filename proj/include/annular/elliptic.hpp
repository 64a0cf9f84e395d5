#ifndef ANNULAR_ELLIPTIC_HPP
#define ANNULAR_ELLIPTIC_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "annular/geometry.hpp"
#include "annular/series.hpp"

namespace annular {

enum class ProblemKind { single_phase, two_phase, pair };

struct SolverOptions {
    int n_radial = 48;
    int n_angular = 128;  // full-circle grid; cosine truncation K = n_angular/4
    // guard on the collocation residual of the linear solve (catches a
    // breakdown of the factorization, not discretization error)
    double residual_guard = 1e-6;
};

// Solved stream function on a perturbed annulus in flattened coordinates.
// Immutable after construction; traces are signed normal derivatives using
// the outward normals of the fluid region (outer: +e_r side, inner: toward
// the hole).
class SpectralSolution {
  public:
    enum class Kind { single_phase, two_phase };

    const FlatteningMap& map() const { return map_; }
    Kind kind() const { return kind_; }
    double gamma() const { return gamma1_; }    // single-phase vorticity
    double gamma1() const { return gamma1_; }   // two-phase core vorticity
    double gamma2() const { return gamma2_; }   // two-phase outer vorticity

    // field values on the (n_radial x M) collocation grid
    const Eigen::MatrixXd& values() const { return u_; }
    // sup of |L u - rhs| over interior collocation points
    double interior_residual() const { return interior_residual_; }

    // signed normal-derivative traces sampled on theta_j = 2*pi*j/n
    std::vector<double> outer_trace(int n) const;
    std::vector<double> inner_trace(int n) const;  // single-phase kinds only
    // cosine coefficients (k=0..K) of d_r psi on a boundary row
    const Eigen::VectorXd& outer_dr_coeffs() const { return dr_outer_hat_; }
    const Eigen::VectorXd& inner_dr_coeffs() const { return dr_inner_hat_; }

    // stream function at a point of the closed domain (two-phase solutions
    // evaluate the core field for r < lambda)
    double eval(double r, double theta) const;

    // two-phase only: cosine coefficients of the interface values
    const Eigen::VectorXd& interface_value_coeffs() const { return iface_hat_; }

  private:
    friend SpectralSolution solve_dirichlet(const AnnulusGeometry&, double,
                                            const SolverOptions&);
    friend SpectralSolution solve_transmission(const AnnulusGeometry&, double,
                                               double, const SolverOptions&);

    SpectralSolution(FlatteningMap map, Kind kind, double g1, double g2)
        : map_(std::move(map)), kind_(kind), gamma1_(g1), gamma2_(g2) {}

    FlatteningMap map_;
    Kind kind_;
    double gamma1_, gamma2_;
    Eigen::MatrixXd u_;
    Eigen::VectorXd dr_outer_hat_, dr_inner_hat_;  // cosine coeffs of u_s/R_s
    Eigen::VectorXd iface_hat_;
    double interior_residual_ = 0.0;
};

// Delta psi = gamma in the annulus, psi = 0 on the outer boundary, psi = 1 on
// the inner boundary. Used by both the partially overdetermined and the
// two-free-boundary problems.
SpectralSolution solve_dirichlet(const AnnulusGeometry& geometry, double gamma,
                                 const SolverOptions& opts = {});

// Piecewise-constant vorticity on the disk with interface fixed at r=lambda
// (geometry.xi must vanish): Delta psi = gamma1 inside, gamma2 outside,
// continuity of psi and of (1/gamma) d_r psi across the interface, psi = 0 on
// the outer boundary. The core is eliminated through its exact
// Dirichlet-to-Neumann map, so only the annulus is collocated.
SpectralSolution solve_transmission(const AnnulusGeometry& geometry, double gamma1,
                                    double gamma2, const SolverOptions& opts = {});

// Angular trace decomposed into mean + zero-mean cosine modes.
struct ResidualTrace {
    double mean = 0.0;
    CosineSeries modes;
    double sup_norm = 0.0;
};
ResidualTrace make_residual_trace(std::span<const double> samples, int order);

// Overdetermined residual operators at fixed analytic Bernoulli constants.
// residual_G: squared outer trace minus Q^gamma (inner boundary must be the
// unperturbed circle).
ResidualTrace residual_G(const AnnulusGeometry& geometry, double gamma,
                         const SolverOptions& opts = {});
// residual_H: squared outer trace of the transmission solve minus gamma2^2/4.
ResidualTrace residual_H(const AnnulusGeometry& geometry, double gamma1,
                         double gamma2, const SolverOptions& opts = {});
// residual_calG: unsquared signed traces minus (q_out, q_in) on both
// boundaries.
std::pair<ResidualTrace, ResidualTrace> residual_calG(
    const AnnulusGeometry& geometry, double gamma, const SolverOptions& opts = {});

}  // namespace annular

#endif
