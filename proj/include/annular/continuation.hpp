#ifndef ANNULAR_CONTINUATION_HPP
#define ANNULAR_CONTINUATION_HPP

#include <string>
#include <vector>

#include "annular/elliptic.hpp"
#include "annular/series.hpp"

namespace annular {

struct NewtonOptions {
    double tol = 1e-9;      // sup-norm tolerance on the residual trace
    int max_iters = 30;
    double fd_step = 1e-6;  // forward-difference step for Jacobian columns
    int n_modes = 16;       // cosine truncation of the boundary unknowns
    SolverOptions solver{33, 64, 1e-6};
};

// Result of an implicit-function (fixed-vorticity) solve of the perturbed
// overdetermined problem with Neumann data  q + rho(theta).
struct StabilityResult {
    CosineSeries rho;
    CosineSeries eta;            // solved boundary
    CosineSeries predicted;      // first-order response tau_k / eigenvalue_k
    double bernoulli_correction = 0.0;
    int newton_iters = 0;
    int max_dampings = 0;        // worst damping count over accepted steps
    double residual_sup = 0.0;
};

StabilityResult newton_solve_G(double lambda, double gamma, const CosineSeries& rho,
                               const NewtonOptions& opts = {});
StabilityResult newton_solve_H(double lambda, double gamma1, double gamma2,
                               const CosineSeries& rho,
                               const NewtonOptions& opts = {});

struct PairStabilityResult {
    CosineSeries rho_out, rho_in;
    CosineSeries eta, xi;
    CosineSeries predicted_eta, predicted_xi;
    double dq_out = 0.0, dq_in = 0.0;
    int newton_iters = 0;
    int max_dampings = 0;
    double residual_sup = 0.0;
};

PairStabilityResult newton_solve_calG(double lambda, double gamma,
                                      const CosineSeries& rho_out,
                                      const CosineSeries& rho_in,
                                      const NewtonOptions& opts = {});

// Bifurcation vorticities for mode k. Uses the closed forms, refined (and
// cross-checkable) by bisection. For the pair problem both determinant roots
// are returned when real; an empty vector reports that none was found.
std::vector<double> detect_bifurcation(ProblemKind kind, int k, double lambda,
                                       double gamma1 = 1.0);
// Interval form: brackets a sign change of the dispersion function inside
// [lo, hi]; empty result when the interval does not bracket a root.
std::vector<double> detect_bifurcation_in(ProblemKind kind, int k, double lambda,
                                          double lo, double hi,
                                          double gamma1 = 1.0);

struct BranchPoint {
    double s = 0.0;       // k0-mode amplitude of eta (branch parameter)
    double gamma = 0.0;   // vorticity parameter at this point
    CosineSeries eta;
    CosineSeries xi;      // pair problem only
    double q_adjust_outer = 0.0;  // Bernoulli-constant corrections
    double q_adjust_inner = 0.0;  // pair problem only
    double residual_sup = 0.0;
    int newton_iters = 0;
};

struct Branch {
    ProblemKind kind = ProblemKind::single_phase;
    int k0 = 1;
    double lambda = 0.5;
    double gamma0 = 0.0;            // detected bifurcation value
    double gamma1_two_phase = 1.0;  // fixed core vorticity (two-phase only)
    std::vector<BranchPoint> points;  // points[0] is the trivial s=0 state
    bool terminated_early = false;
    std::string termination_reason;
    int mode_truncation = 16;
};

struct BranchOptions {
    NewtonOptions newton;
    int max_halvings = 3;    // predictor step halvings before giving up
    double tail_energy_tol = 1e-8;  // top-quartile mode energy guard
    int max_truncation_doublings = 2;
};

Branch trace_branch(ProblemKind kind, int k0, double lambda, double gamma0,
                    double ds, int n_steps, double gamma1_two_phase = 1.0,
                    const BranchOptions& opts = {});

struct NontrivialityReport {
    bool ok = false;
    double min_sup_ratio = 0.0;   // min_{s!=0} ||eta||_sup / |s|
    double max_residual = 0.0;
    double offmode_energy_ratio = 0.0;  // E(s_max)/E(s_max/2), ~4 when O(s^2)
    double kernel_ratio = 0.0;          // beta1/alpha1 at the first step (pair)
    std::string detail;
};
NontrivialityReport verify_branch_nontriviality(const Branch& branch);

}  // namespace annular

#endif
