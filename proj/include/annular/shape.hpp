#ifndef ANNULAR_SHAPE_HPP
#define ANNULAR_SHAPE_HPP

#include <Eigen/Dense>
#include <vector>

#include "annular/elliptic.hpp"

namespace annular {

enum class PerturbationSide { outer, inner };

// Closed-form mode-k shape-derivative field for a unit cos(k theta)
// perturbation of one boundary, on the unperturbed reference domain.
// The annulus part is c_minus r^{-k} + c_plus r^{k}; two-phase solutions add
// the core part interior_coeff * r^{k}.
struct ShapeDerivativeClosed {
    double c_minus = 0.0;
    double c_plus = 0.0;
    double interior_coeff = 0.0;  // two-phase only
};
ShapeDerivativeClosed shape_derivative_closed(ProblemKind kind, int k,
                                              double lambda, double gamma1,
                                              double gamma2,
                                              PerturbationSide side);

// Evaluate the closed-form field at radius r (annulus part, or the core part
// below lambda for the two-phase problem).
double shape_derivative_closed_eval(const ShapeDerivativeClosed& c, int k,
                                    double lambda, double r, double theta,
                                    ProblemKind kind);

// Finite-difference shape derivative on the unperturbed reference grid:
//   (psi_t composed with the deformation - psi_0)/t - grad psi_0 . h,
// where the deformation field is the radial blend
//   h = (xi0(theta)(1-s) + eta0(theta) s) e_r
// induced by the flattening. Returns the field on the collocation grid of
// `map`, which must belong to the unperturbed geometry.
struct ShapeDerivativeField {
    Eigen::MatrixXd values;  // (n_radial x M)
    double step = 0.0;
};
ShapeDerivativeField shape_derivative_fd(ProblemKind kind, double lambda,
                                         double gamma1, double gamma2,
                                         const CosineSeries& eta0,
                                         const CosineSeries& xi0, double t,
                                         const SolverOptions& opts = {});

// Sup-norm distance between an FD field and the closed form for a single
// cos(k theta) direction.
double shape_derivative_error(const ShapeDerivativeField& fd,
                              const ShapeDerivativeClosed& closed, int k,
                              double lambda, ProblemKind kind,
                              const SolverOptions& opts);

// Mean curvature of the outer boundary and the second normal derivative of
// psi recovered from the boundary identity
//   gamma = d_nn psi + H d_n psi + Delta_tau psi,
// cross-checked against the Hessian of the solved field.
struct CurvatureDecomposition {
    std::vector<double> mean_curvature;      // H(theta) on the export grid
    std::vector<double> normal_normal;       // d_nn psi from the identity
    std::vector<double> normal_normal_direct;  // d_nn psi from the Hessian
    double tangential_laplacian_sup = 0.0;   // sup |Delta_tau psi| on boundary
    double consistency_residual = 0.0;       // sup |identity - direct|
};
CurvatureDecomposition curvature_decomposition(const SpectralSolution& sol,
                                               int n_samples = 0);

}  // namespace annular

#endif
