#include "annular/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "annular/errors.hpp"
#include "annular/radial.hpp"

namespace annular {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Evaluate a cosine-coefficient vector (k = 0..K) at angle theta.
double synth_cos(const Eigen::VectorXd& hat, double theta) {
    double f = hat(0);
    for (int k = 1; k < hat.size(); ++k) f += hat(k) * std::cos(k * theta);
    return f;
}

// Barycentric weights for Chebyshev-Lobatto nodes (ascending order).
Eigen::VectorXd lobatto_weights(int n) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) {
        w(i) = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == n - 1) w(i) *= 0.5;
    }
    return w;
}

struct AssembledSolve {
    Eigen::MatrixXd u;
    double interior_residual;
};

// Dense collocation solve of the transformed problem. boundary_inner_robin:
// when set, the inner row enforces the two-phase interface condition
//   u_s/R_s - (g2/g1) (1/lambda) Sum_k k d_k cos(k theta) = g2 lambda / 2,
// otherwise u = inner_dirichlet at s=0.
AssembledSolve solve_collocation(const FlatteningMap& map, double rhs_gamma,
                                 bool inner_robin, double inner_dirichlet,
                                 double g1, double g2, double residual_guard) {
    const int nr = map.n_radial();
    const int M = map.n_theta();
    const int N = nr * M;
    const auto& Ds = map.d_s();
    const auto& Dss = map.d_ss();
    const auto& Dt = map.d_theta();
    const auto& Dtt = map.d_theta_theta();
    const auto idx = [M](int i, int j) { return i * M + j; };

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);

    for (int i = 1; i < nr - 1; ++i) {
        for (int j = 0; j < M; ++j) {
            const int row = idx(i, j);
            const double css = map.c_ss()(i, j);
            const double cst = map.c_st()(i, j);
            const double ctt = map.c_tt()(i, j);
            const double cs = map.c_s()(i, j);
            for (int ip = 0; ip < nr; ++ip) {
                const double ds = Ds(i, ip);
                const double dss = Dss(i, ip);
                A(row, idx(ip, j)) += css * dss + cs * ds;
                if (cst != 0.0) {
                    for (int jp = 0; jp < M; ++jp)
                        A(row, idx(ip, jp)) += cst * ds * Dt(j, jp);
                }
            }
            for (int jp = 0; jp < M; ++jp) A(row, idx(i, jp)) += ctt * Dtt(j, jp);
            b(row) = rhs_gamma;
        }
    }
    // outer boundary s=1 (i = nr-1): homogeneous Dirichlet
    for (int j = 0; j < M; ++j) A(idx(nr - 1, j), idx(nr - 1, j)) = 1.0;
    // inner boundary s=0 (i = 0)
    if (!inner_robin) {
        for (int j = 0; j < M; ++j) {
            A(idx(0, j), idx(0, j)) = 1.0;
            b(idx(0, j)) = inner_dirichlet;
        }
    } else {
        const double lambda = map.geometry().lambda;
        const auto& Tk = map.mode_scale_k();
        for (int j = 0; j < M; ++j) {
            const int row = idx(0, j);
            for (int ip = 0; ip < nr; ++ip)
                A(row, idx(ip, j)) += Ds(0, ip) / map.r_s()(j);
            for (int jp = 0; jp < M; ++jp)
                A(row, idx(0, jp)) -= (g2 / g1) * Tk(j, jp) / lambda;
            b(row) = g2 * lambda / 2.0;
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd sol = lu.solve(b);
    if (!sol.allFinite())
        throw SolverError("collocation solve produced non-finite values");

    double res = (A * sol - b).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (res > residual_guard * scale)
        throw SolverError("collocation solve residual too large (" +
                              std::to_string(res) + "); system likely ill-conditioned",
                          res);

    AssembledSolve out;
    out.u.resize(nr, M);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < M; ++j) out.u(i, j) = sol(idx(i, j));
    out.interior_residual = res;
    return out;
}

// Mode-decoupled solve for theta-independent geometry.
AssembledSolve solve_unperturbed(const FlatteningMap& map, double rhs_gamma,
                                 bool inner_robin, double inner_dirichlet,
                                 double g1, double g2) {
    const int nr = map.n_radial();
    const int M = map.n_theta();
    const double lambda = map.geometry().lambda;
    const double rs = map.r_s()(0);  // constant in theta here
    const auto& Ds = map.d_s();
    const auto& Dss = map.d_ss();

    Eigen::MatrixXd uhat(nr, M);
    for (int k = 0; k < M; ++k) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nr, nr);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nr);
        for (int i = 1; i < nr - 1; ++i) {
            const double r = map.r()(i, 0);
            for (int ip = 0; ip < nr; ++ip)
                A(i, ip) = Dss(i, ip) / (rs * rs) + Ds(i, ip) / (r * rs);
            A(i, i) -= static_cast<double>(k) * k / (r * r);
            b(i) = (k == 0) ? rhs_gamma : 0.0;
        }
        A(nr - 1, nr - 1) = 1.0;  // outer Dirichlet
        if (!inner_robin) {
            A(0, 0) = 1.0;
            b(0) = (k == 0) ? inner_dirichlet : 0.0;
        } else {
            for (int ip = 0; ip < nr; ++ip) A(0, ip) = Ds(0, ip) / rs;
            A(0, 0) -= (g2 / g1) * k / lambda;
            b(0) = (k == 0) ? g2 * lambda / 2.0 : 0.0;
        }
        uhat.col(k) = A.partialPivLu().solve(b);
    }
    AssembledSolve out;
    out.u = uhat * map.cos_synthesis().transpose();
    out.interior_residual = 0.0;
    // residual diagnostic on a few interior rows
    double res = 0.0;
    for (int k = 0; k < M; ++k) {
        for (int i = 1; i < nr - 1; ++i) {
            const double r = map.r()(i, 0);
            double v = 0.0;
            for (int ip = 0; ip < nr; ++ip)
                v += (Dss(i, ip) / (rs * rs) + Ds(i, ip) / (r * rs)) * uhat(ip, k);
            v -= static_cast<double>(k) * k / (r * r) * uhat(i, k);
            if (k == 0) v -= rhs_gamma;
            res = std::max(res, std::abs(v));
        }
    }
    out.interior_residual = res;
    return out;
}

// cosine coefficients of d_r psi = u_s / R_s along a boundary row
Eigen::VectorXd boundary_dr_coeffs(const FlatteningMap& map,
                                   const Eigen::MatrixXd& u, int row) {
    const int nr = map.n_radial();
    const int M = map.n_theta();
    Eigen::VectorXd us = Eigen::VectorXd::Zero(M);
    for (int j = 0; j < M; ++j) {
        double acc = 0.0;
        for (int i = 0; i < nr; ++i) acc += map.d_s()(row, i) * u(i, j);
        us(j) = acc / map.r_s()(j);
    }
    return map.cos_analysis() * us;
}

}  // namespace

std::vector<double> SpectralSolution::outer_trace(int n) const {
    const auto& g = map_.geometry();
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double th = kTwoPi * j / n;
        double rho = g.outer_radius(th);
        double drho = g.eta.deriv(th);
        double psi_r = synth_cos(dr_outer_hat_, th);
        out[j] = psi_r * std::sqrt(rho * rho + drho * drho) / rho;
    }
    return out;
}

std::vector<double> SpectralSolution::inner_trace(int n) const {
    if (kind_ == Kind::two_phase)
        throw ConfigError("two-phase solutions have no inner free boundary trace");
    const auto& g = map_.geometry();
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        double th = kTwoPi * j / n;
        double rho = g.inner_radius(th);
        double drho = g.xi.deriv(th);
        double psi_r = synth_cos(dr_inner_hat_, th);
        out[j] = -psi_r * std::sqrt(rho * rho + drho * drho) / rho;
    }
    return out;
}

double SpectralSolution::eval(double r, double theta) const {
    const auto& g = map_.geometry();
    double rin = g.inner_radius(theta);
    double rout = g.outer_radius(theta);
    if (kind_ == Kind::two_phase && r < rin) {
        // core field gamma1 r^2/4 + harmonic continuation of the interface data
        double lambda = g.lambda;
        double v = gamma1_ * (r * r - lambda * lambda) / 4.0 + iface_hat_(0);
        for (int k = 1; k < iface_hat_.size(); ++k)
            v += iface_hat_(k) * std::pow(r / lambda, k) * std::cos(k * theta);
        return v;
    }
    if (r < rin - 1e-12 || r > rout + 1e-12)
        throw DomainError("evaluation point outside the solved domain");
    double s = (r - rin) / (rout - rin);
    s = std::clamp(s, 0.0, 1.0);

    const int nr = map_.n_radial();
    const int M = map_.n_theta();
    // values of the cosine synthesis at this theta for each radial node
    Eigen::VectorXd f(nr);
    Eigen::VectorXd hat(M);
    for (int i = 0; i < nr; ++i) {
        double acc = 0.0;
        for (int k = 0; k < M; ++k) {
            double c = 0.0;
            for (int j = 0; j < M; ++j) c += map_.cos_analysis()(k, j) * u_(i, j);
            acc += c * std::cos(k * theta);
        }
        f(i) = acc;
    }
    // barycentric interpolation in s
    const auto& sn = map_.s_nodes();
    Eigen::VectorXd w = lobatto_weights(nr);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nr; ++i) {
        double d = s - sn[i];
        if (std::abs(d) < 1e-14) return f(i);
        double t = w(i) / d;
        num += t * f(i);
        den += t;
    }
    return num / den;
}

SpectralSolution solve_dirichlet(const AnnulusGeometry& geometry, double gamma,
                                 const SolverOptions& opts) {
    FlatteningMap map = flatten(geometry, opts.n_radial, opts.n_angular);
    AssembledSolve sol =
        geometry.is_unperturbed()
            ? solve_unperturbed(map, gamma, false, 1.0, 0.0, 0.0)
            : solve_collocation(map, gamma, false, 1.0, 0.0, 0.0,
                                opts.residual_guard);
    SpectralSolution out(std::move(map), SpectralSolution::Kind::single_phase,
                         gamma, 0.0);
    out.u_ = std::move(sol.u);
    out.interior_residual_ = sol.interior_residual;
    out.dr_outer_hat_ = boundary_dr_coeffs(out.map_, out.u_, out.map_.n_radial() - 1);
    out.dr_inner_hat_ = boundary_dr_coeffs(out.map_, out.u_, 0);
    out.iface_hat_ = Eigen::VectorXd::Zero(out.map_.n_theta());
    return out;
}

SpectralSolution solve_transmission(const AnnulusGeometry& geometry, double gamma1,
                                    double gamma2, const SolverOptions& opts) {
    if (!geometry.xi.is_zero())
        throw ConfigError(
            "transmission solve requires the interface fixed at r=lambda (xi=0)");
    if (gamma1 == 0.0)
        throw DegenerateParameterError("transmission solve requires gamma1 != 0");
    FlatteningMap map = flatten(geometry, opts.n_radial, opts.n_angular);
    AssembledSolve sol =
        geometry.is_unperturbed()
            ? solve_unperturbed(map, gamma2, true, 0.0, gamma1, gamma2)
            : solve_collocation(map, gamma2, true, 0.0, gamma1, gamma2,
                                opts.residual_guard);
    SpectralSolution out(std::move(map), SpectralSolution::Kind::two_phase, gamma1,
                         gamma2);
    out.u_ = std::move(sol.u);
    out.interior_residual_ = sol.interior_residual;
    out.dr_outer_hat_ = boundary_dr_coeffs(out.map_, out.u_, out.map_.n_radial() - 1);
    out.dr_inner_hat_ = boundary_dr_coeffs(out.map_, out.u_, 0);
    // interface values of the annulus phase, for the core reconstruction
    Eigen::VectorXd iface(out.map_.n_theta());
    for (int j = 0; j < out.map_.n_theta(); ++j) iface(j) = out.u_(0, j);
    out.iface_hat_ = out.map_.cos_analysis() * iface;
    return out;
}

ResidualTrace make_residual_trace(std::span<const double> samples, int order) {
    ResidualTrace out;
    auto proj = project_to_cosines(samples, order);
    out.mean = proj.mean;
    out.modes = std::move(proj.modes);
    out.sup_norm = 0.0;
    for (double v : samples) out.sup_norm = std::max(out.sup_norm, std::abs(v));
    return out;
}

ResidualTrace residual_G(const AnnulusGeometry& geometry, double gamma,
                         const SolverOptions& opts) {
    if (!geometry.xi.is_zero())
        throw ConfigError("residual_G expects an unperturbed inner circle");
    SpectralSolution sol = solve_dirichlet(geometry, gamma, opts);
    double q2 = bernoulli_constant(geometry.lambda, gamma);
    std::vector<double> t = sol.outer_trace(opts.n_angular);
    for (double& v : t) v = v * v - q2;
    return make_residual_trace(t, opts.n_angular / 4);
}

ResidualTrace residual_H(const AnnulusGeometry& geometry, double gamma1,
                         double gamma2, const SolverOptions& opts) {
    SpectralSolution sol = solve_transmission(geometry, gamma1, gamma2, opts);
    double q2 = bernoulli_constant_two_phase(gamma2);
    std::vector<double> t = sol.outer_trace(opts.n_angular);
    for (double& v : t) v = v * v - q2;
    return make_residual_trace(t, opts.n_angular / 4);
}

std::pair<ResidualTrace, ResidualTrace> residual_calG(
    const AnnulusGeometry& geometry, double gamma, const SolverOptions& opts) {
    SpectralSolution sol = solve_dirichlet(geometry, gamma, opts);
    auto q = neumann_constants(geometry.lambda, gamma);
    std::vector<double> tout = sol.outer_trace(opts.n_angular);
    std::vector<double> tin = sol.inner_trace(opts.n_angular);
    for (double& v : tout) v -= q.outer;
    for (double& v : tin) v -= q.inner;
    return {make_residual_trace(tout, opts.n_angular / 4),
            make_residual_trace(tin, opts.n_angular / 4)};
}

}  // namespace annular
