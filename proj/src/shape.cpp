#include "annular/shape.hpp"

#include <cmath>
#include <numbers>

#include "annular/dispersion.hpp"
#include "annular/errors.hpp"
#include "annular/radial.hpp"

namespace annular {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double synth_cos(const Eigen::VectorXd& hat, double theta) {
    double f = hat(0);
    for (int k = 1; k < hat.size(); ++k) f += hat(k) * std::cos(k * theta);
    return f;
}
}  // namespace

ShapeDerivativeClosed shape_derivative_closed(ProblemKind kind, int k,
                                              double lambda, double gamma1,
                                              double gamma2,
                                              PerturbationSide side) {
    ShapeDerivativeClosed out;
    switch (kind) {
        case ProblemKind::single_phase: {
            if (side != PerturbationSide::outer)
                throw ConfigError("single-phase problem has a fixed inner circle");
            auto [A, B] = harmonic_mode_single(k, lambda, gamma1);
            out.c_minus = A;
            out.c_plus = B;
            return out;
        }
        case ProblemKind::two_phase: {
            if (side != PerturbationSide::outer)
                throw ConfigError("two-phase interface is fixed at r=lambda");
            auto [D, E, F] = harmonic_mode_two_phase(k, lambda, gamma1, gamma2);
            out.c_minus = E;
            out.c_plus = F;
            out.interior_coeff = D;
            return out;
        }
        case ProblemKind::pair: {
            if (side == PerturbationSide::outer) {
                auto [A, B] = harmonic_mode_single(k, lambda, gamma1);
                out.c_minus = A;
                out.c_plus = B;
                return out;
            }
            // Inner direction: field vanishing on r=1 with Dirichlet data
            // -psi_r(lambda) cos(k theta) on the interface (the boundary moves
            // outward along +e_r for positive xi).
            double p =
                trivial_stream_dr(RadialProfile::single(lambda, gamma1), lambda);
            double pk = std::pow(lambda, k);
            double cm = -p * pk / (1.0 - pk * pk);
            out.c_minus = cm;
            out.c_plus = -cm;
            return out;
        }
    }
    throw ConfigError("unknown problem kind");
}

double shape_derivative_closed_eval(const ShapeDerivativeClosed& c, int k,
                                    double lambda, double r, double theta,
                                    ProblemKind kind) {
    if (kind == ProblemKind::two_phase && r < lambda)
        return c.interior_coeff * std::pow(r, k) * std::cos(k * theta);
    return (c.c_minus * std::pow(r, -k) + c.c_plus * std::pow(r, k)) *
           std::cos(k * theta);
}

ShapeDerivativeField shape_derivative_fd(ProblemKind kind, double lambda,
                                         double gamma1, double gamma2,
                                         const CosineSeries& eta0,
                                         const CosineSeries& xi0, double t,
                                         const SolverOptions& opts) {
    if (t <= 0.0) throw ConfigError("shape-derivative step must be positive");
    if (kind == ProblemKind::two_phase && !xi0.is_zero())
        throw ConfigError("two-phase interface is fixed; xi direction must vanish");
    if (kind == ProblemKind::single_phase && !xi0.is_zero())
        throw ConfigError("single-phase inner circle is fixed; xi direction must vanish");

    AnnulusGeometry base = AnnulusGeometry::unperturbed(lambda);
    AnnulusGeometry moved(lambda, t * eta0, t * xi0);
    moved.validate();

    auto solve = [&](const AnnulusGeometry& g) {
        if (kind == ProblemKind::two_phase)
            return solve_transmission(g, gamma1, gamma2, opts);
        return solve_dirichlet(g, gamma1, opts);
    };
    SpectralSolution u0 = solve(base);
    SpectralSolution ut = solve(moved);

    const FlatteningMap& map = u0.map();
    const int nr = map.n_radial();
    const int M = map.n_theta();
    auto prof = kind == ProblemKind::two_phase
                    ? RadialProfile::two_phase(lambda, gamma1, gamma2)
                    : RadialProfile::single(lambda, gamma1);

    ShapeDerivativeField out;
    out.step = t;
    out.values.resize(nr, M);
    for (int i = 0; i < nr; ++i) {
        double s = map.s_nodes()[i];
        for (int j = 0; j < M; ++j) {
            double th = map.theta_nodes()[j];
            double h = xi0(th) * (1.0 - s) + eta0(th) * s;
            double r0 = map.r()(i, j);
            out.values(i, j) =
                (ut.values()(i, j) - u0.values()(i, j)) / t -
                trivial_stream_dr(prof, std::min(r0, 1.0)) * h;
        }
    }
    return out;
}

double shape_derivative_error(const ShapeDerivativeField& fd,
                              const ShapeDerivativeClosed& closed, int k,
                              double lambda, ProblemKind kind,
                              const SolverOptions& opts) {
    FlatteningMap map(AnnulusGeometry::unperturbed(lambda), opts.n_radial,
                      opts.n_angular);
    double err = 0.0;
    for (int i = 0; i < map.n_radial(); ++i) {
        for (int j = 0; j < map.n_theta(); ++j) {
            double r = map.r()(i, j);
            double th = map.theta_nodes()[j];
            double ref = shape_derivative_closed_eval(closed, k, lambda, r, th, kind);
            err = std::max(err, std::abs(fd.values(i, j) - ref));
        }
    }
    return err;
}

CurvatureDecomposition curvature_decomposition(const SpectralSolution& sol,
                                               int n_samples) {
    const FlatteningMap& map = sol.map();
    const AnnulusGeometry& g = map.geometry();
    const int n = n_samples > 0 ? n_samples : map.n_angular();
    const int nr = map.n_radial();
    const int M = map.n_theta();
    const int row = nr - 1;  // outer boundary
    const double gamma_b = sol.kind() == SpectralSolution::Kind::two_phase
                               ? sol.gamma2()
                               : sol.gamma();

    // collocation-row derivative samples
    Eigen::VectorXd us(M), uss(M), uval(M);
    for (int j = 0; j < M; ++j) {
        double a1 = 0.0, a2 = 0.0;
        for (int i = 0; i < nr; ++i) {
            a1 += map.d_s()(row, i) * sol.values()(i, j);
            a2 += map.d_ss()(row, i) * sol.values()(i, j);
        }
        us(j) = a1;
        uss(j) = a2;
        uval(j) = sol.values()(row, j);
    }
    Eigen::VectorXd ust = map.d_theta() * us;
    Eigen::VectorXd ut = map.d_theta() * uval;
    Eigen::VectorXd utt = map.d_theta_theta() * uval;

    Eigen::VectorXd direct(M);
    for (int j = 0; j < M; ++j) {
        double rs = map.r_s()(j);
        double r = map.r()(row, j);
        double rt = map.r_theta()(row, j);
        double rtt = map.r_theta_theta()(row, j);
        double rst = map.r_s_theta()(j);
        double st = -rt / rs;
        double stt = -rtt / rs + 2.0 * rt * rst / (rs * rs);

        double psi_r = us(j) / rs;
        double psi_rr = uss(j) / (rs * rs);
        double psi_rt = (ust(j) + uss(j) * st) / rs - us(j) * rst / (rs * rs);
        double psi_tp = ut(j) + us(j) * st;  // polar theta-derivative
        double psi_ttp = uss(j) * st * st + 2.0 * ust(j) * st + utt(j) + us(j) * stt;

        double hrr = psi_rr;
        double hrt = psi_rt / r - psi_tp / (r * r);
        double htt = psi_ttp / (r * r) + psi_r / r;

        double rho = r;       // boundary row: r = outer radius
        double drho = rt;     // and r_theta = rho'
        double j2 = rho * rho + drho * drho;
        direct(j) =
            (rho * rho * hrr - 2.0 * rho * drho * hrt + drho * drho * htt) / j2;
    }
    Eigen::VectorXd direct_hat = map.cos_analysis() * direct;

    // boundary trace of psi for the tangential Laplacian (identically the
    // Dirichlet constant for these problems; computed, not assumed)
    Eigen::VectorXd uval_hat = map.cos_analysis() * uval;

    CurvatureDecomposition out;
    out.mean_curvature.resize(n);
    out.normal_normal.resize(n);
    out.normal_normal_direct.resize(n);
    std::vector<double> trace = sol.outer_trace(n);
    double tl_sup = 0.0, cons = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = kTwoPi * j / n;
        double rho = g.outer_radius(th);
        double d1 = g.eta.deriv(th);
        double d2 = g.eta.deriv2(th);
        double j2 = rho * rho + d1 * d1;
        double H = (rho * rho + 2.0 * d1 * d1 - rho * d2) / std::pow(j2, 1.5);
        out.mean_curvature[j] = H;

        // Delta_tau of the boundary values via arclength derivatives
        double gv1 = 0.0, gv2 = 0.0;
        for (int k = 1; k < uval_hat.size(); ++k) {
            gv1 -= uval_hat(k) * k * std::sin(k * th);
            gv2 -= uval_hat(k) * k * k * std::cos(k * th);
        }
        double jj = std::sqrt(j2);
        double djj = (rho * d1 + d1 * d2) / jj;
        double delta_tau = (gv2 * jj - gv1 * djj) / (j2 * jj);
        tl_sup = std::max(tl_sup, std::abs(delta_tau));

        out.normal_normal[j] = gamma_b - H * trace[j] - delta_tau;
        out.normal_normal_direct[j] = synth_cos(direct_hat, th);
        cons = std::max(cons,
                        std::abs(out.normal_normal[j] - out.normal_normal_direct[j]));
    }
    out.tangential_laplacian_sup = tl_sup;
    out.consistency_residual = cons;
    return out;
}

}  // namespace annular
