#include "annular/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "annular/errors.hpp"

namespace annular {

namespace {
constexpr double kPi = std::numbers::pi;

// Chebyshev-Lobatto differentiation matrix on nodes x_i = cos(pi i / (n-1)),
// ordered so that the mapped s-nodes ascend from 0 to 1.
Eigen::MatrixXd chebyshev_lobatto_diff(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd d(n, n);
    std::vector<double> c(n, 1.0);
    c[0] = 2.0;
    c[n - 1] = 2.0;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = c[i] / c[j] * sign / (x[i] - x[j]);
            row_sum += d(i, j);
        }
        d(i, i) = -row_sum;  // negative-sum trick for the diagonal
    }
    return d;
}
}  // namespace

void AnnulusGeometry::validate(int n_probe) const {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw GeometryError("inner radius lambda must lie in (0,1), got " +
                            std::to_string(lambda));
    double min_outer = std::numeric_limits<double>::infinity();
    double max_inner = -std::numeric_limits<double>::infinity();
    double min_inner = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_probe; ++j) {
        double th = 2.0 * kPi * j / n_probe;
        min_outer = std::min(min_outer, outer_radius(th));
        max_inner = std::max(max_inner, inner_radius(th));
        min_inner = std::min(min_inner, inner_radius(th));
    }
    if (!(min_inner > 0.0))
        throw GeometryError("inner boundary not strictly positive: min radius " +
                            std::to_string(min_inner));
    if (!(min_outer > max_inner))
        throw GeometryError("boundaries out of order: min outer " +
                            std::to_string(min_outer) + " <= max inner " +
                            std::to_string(max_inner));
}

FlatteningMap::FlatteningMap(AnnulusGeometry geometry, int n_radial, int n_angular)
    : geom_(std::move(geometry)), n_radial_(n_radial), n_angular_(n_angular) {
    if (n_radial_ < 4) throw ConfigError("n_radial must be >= 4");
    if (n_angular_ < 8 || n_angular_ % 4 != 0)
        throw ConfigError("n_angular must be a multiple of 4, >= 8");

    const int nr = n_radial_;
    const int M = n_angular_ / 4 + 1;

    // radial nodes: s = (1 - cos(pi i/(nr-1)))/2 ascending from 0 to 1
    std::vector<double> x(nr);
    s_.resize(nr);
    for (int i = 0; i < nr; ++i) {
        x[i] = std::cos(kPi * (nr - 1 - i) / (nr - 1));
        s_[i] = 0.5 * (1.0 + x[i]);
    }
    Eigen::MatrixXd dx = chebyshev_lobatto_diff(x);
    Ds_ = 2.0 * dx;  // d/ds = 2 d/dx
    Dss_ = Ds_ * Ds_;

    // angular midpoint nodes on [0,pi]
    theta_.resize(M);
    for (int j = 0; j < M; ++j) theta_[j] = kPi * (j + 0.5) / M;

    // DCT-II analysis/synthesis and derivative matrices for even functions
    Cfwd_.resize(M, M);
    Vcos_.resize(M, M);
    Eigen::MatrixXd vsin(M, M);
    for (int j = 0; j < M; ++j) {
        for (int k = 0; k < M; ++k) {
            Vcos_(j, k) = std::cos(k * theta_[j]);
            vsin(j, k) = std::sin(k * theta_[j]);
            Cfwd_(k, j) = (k == 0 ? 1.0 : 2.0) / M * std::cos(k * theta_[j]);
        }
    }
    Eigen::VectorXd kvec(M), k2vec(M);
    for (int k = 0; k < M; ++k) {
        kvec(k) = k;
        k2vec(k) = static_cast<double>(k) * k;
    }
    Dt_ = -vsin * kvec.asDiagonal() * Cfwd_;
    Dtt_ = -Vcos_ * k2vec.asDiagonal() * Cfwd_;
    Tk_ = Vcos_ * kvec.asDiagonal() * Cfwd_;

    // metric terms of r(s,theta) = rin(theta)(1-s) + rout(theta) s
    R_.resize(nr, M);
    Rt_.resize(nr, M);
    Rtt_.resize(nr, M);
    Rs_.resize(M);
    Rst_.resize(M);
    for (int j = 0; j < M; ++j) {
        double th = theta_[j];
        double rin = geom_.inner_radius(th);
        double rout = geom_.outer_radius(th);
        double rin_t = geom_.xi.deriv(th);
        double rout_t = geom_.eta.deriv(th);
        double rin_tt = geom_.xi.deriv2(th);
        double rout_tt = geom_.eta.deriv2(th);
        Rs_(j) = rout - rin;
        Rst_(j) = rout_t - rin_t;
        for (int i = 0; i < nr; ++i) {
            double s = s_[i];
            R_(i, j) = rin * (1.0 - s) + rout * s;
            Rt_(i, j) = rin_t * (1.0 - s) + rout_t * s;
            Rtt_(i, j) = rin_tt * (1.0 - s) + rout_tt * s;
        }
    }

    // Laplacian coefficients via s_theta = -R_theta/R_s (R is linear in s, so
    // s_rr = 0 and the radial factor is simply 1/R_s).
    Css_.resize(nr, M);
    Cst_.resize(nr, M);
    Ctt_.resize(nr, M);
    Cs_.resize(nr, M);
    for (int j = 0; j < M; ++j) {
        double rs = Rs_(j);
        for (int i = 0; i < nr; ++i) {
            double r = R_(i, j);
            double st = -Rt_(i, j) / rs;
            double stt = -Rtt_(i, j) / rs + 2.0 * Rt_(i, j) * Rst_(j) / (rs * rs);
            Css_(i, j) = 1.0 / (rs * rs) + st * st / (r * r);
            Cst_(i, j) = 2.0 * st / (r * r);
            Ctt_(i, j) = 1.0 / (r * r);
            Cs_(i, j) = 1.0 / (r * rs) + stt / (r * r);
        }
    }
}

FlatteningMap flatten(const AnnulusGeometry& geometry, int n_radial, int n_angular) {
    geometry.validate();
    return FlatteningMap(geometry, n_radial, n_angular);
}

}  // namespace annular
