#ifndef ANNULAR_GEOMETRY_HPP
#define ANNULAR_GEOMETRY_HPP

#include <Eigen/Dense>
#include <vector>

#include "annular/series.hpp"

namespace annular {

// Annular domain between two perturbed circles:
//   inner boundary r = lambda + xi(theta), outer boundary r = 1 + eta(theta).
// Both perturbations are zero-mean even cosine series, so the domain is
// symmetric about the horizontal axis by construction.
struct AnnulusGeometry {
    double lambda = 0.5;
    CosineSeries eta;  // outer perturbation
    CosineSeries xi;   // inner perturbation

    AnnulusGeometry() = default;
    AnnulusGeometry(double lambda_, CosineSeries eta_, CosineSeries xi_)
        : lambda(lambda_), eta(std::move(eta_)), xi(std::move(xi_)) {}
    static AnnulusGeometry unperturbed(double lambda_) {
        return AnnulusGeometry(lambda_, CosineSeries(), CosineSeries());
    }

    double outer_radius(double theta) const { return 1.0 + eta(theta); }
    double inner_radius(double theta) const { return lambda + xi(theta); }

    bool is_unperturbed(double tol = 0.0) const {
        return eta.is_zero(tol) && xi.is_zero(tol);
    }

    // Enforces min(1+eta) > max(lambda+xi) > 0 (and min(lambda+xi) > 0) on a
    // dense probe grid. Throws GeometryError on violation.
    void validate(int n_probe = 2048) const;
};

// Blending map from the reference rectangle (s,theta) in [0,1]x[0,pi] onto
// the perturbed annulus:
//   r(s,theta) = (lambda + xi(theta)) (1-s) + (1 + eta(theta)) s.
// Precomputes the collocation grids, spectral differentiation matrices and
// the metric terms needed to assemble the transformed Laplacian.
//
// Radial collocation: Chebyshev-Lobatto points mapped to [0,1]
// (s[0] = 0 inner boundary, s[n_radial-1] = 1 outer boundary).
// Angular collocation: midpoint grid on [0,pi]; evenness makes cosine modes
// 0..M-1 exactly representable, with M = n_angular/4 + 1 so that the default
// full-circle grid of 128 points carries truncation K = 32.
class FlatteningMap {
  public:
    FlatteningMap(AnnulusGeometry geometry, int n_radial = 48, int n_angular = 128);

    const AnnulusGeometry& geometry() const { return geom_; }
    int n_radial() const { return n_radial_; }
    int n_angular() const { return n_angular_; }
    int n_theta() const { return static_cast<int>(theta_.size()); }  // M
    int max_mode() const { return n_theta() - 1; }                   // K

    const std::vector<double>& s_nodes() const { return s_; }
    const std::vector<double>& theta_nodes() const { return theta_; }

    // r and its partials on the collocation grid (n_radial x M).
    const Eigen::MatrixXd& r() const { return R_; }
    const Eigen::MatrixXd& r_theta() const { return Rt_; }
    const Eigen::MatrixXd& r_theta_theta() const { return Rtt_; }
    const Eigen::VectorXd& r_s() const { return Rs_; }        // per theta node
    const Eigen::VectorXd& r_s_theta() const { return Rst_; } // per theta node

    // Coefficients of the transformed Laplacian
    //   Lu = c_ss u_ss + c_st u_{s theta} + c_tt u_{theta theta} + c_s u_s
    // such that Lu = (Delta psi)(r(s,theta), theta).
    const Eigen::MatrixXd& c_ss() const { return Css_; }
    const Eigen::MatrixXd& c_st() const { return Cst_; }
    const Eigen::MatrixXd& c_tt() const { return Ctt_; }
    const Eigen::MatrixXd& c_s() const { return Cs_; }

    // Spectral differentiation matrices.
    const Eigen::MatrixXd& d_s() const { return Ds_; }        // n_r x n_r
    const Eigen::MatrixXd& d_ss() const { return Dss_; }
    const Eigen::MatrixXd& d_theta() const { return Dt_; }    // M x M (values of f')
    const Eigen::MatrixXd& d_theta_theta() const { return Dtt_; }
    // values -> cosine coefficients (M x M) and back
    const Eigen::MatrixXd& cos_analysis() const { return Cfwd_; }
    const Eigen::MatrixXd& cos_synthesis() const { return Vcos_; }
    // multiply mode k by k (Dirichlet-to-Neumann weight of the unit disk)
    const Eigen::MatrixXd& mode_scale_k() const { return Tk_; }

  private:
    AnnulusGeometry geom_;
    int n_radial_;
    int n_angular_;
    std::vector<double> s_;
    std::vector<double> theta_;
    Eigen::MatrixXd R_, Rt_, Rtt_;
    Eigen::VectorXd Rs_, Rst_;
    Eigen::MatrixXd Css_, Cst_, Ctt_, Cs_;
    Eigen::MatrixXd Ds_, Dss_, Dt_, Dtt_, Cfwd_, Vcos_, Tk_;
};

// Factory matching the operation name used throughout: validates the
// geometry, then precomputes the map.
FlatteningMap flatten(const AnnulusGeometry& geometry, int n_radial = 48,
                      int n_angular = 128);

}  // namespace annular

#endif
