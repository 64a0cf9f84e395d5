#include "annular/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "annular/dispersion.hpp"
#include "annular/errors.hpp"
#include "annular/radial.hpp"

namespace annular {

namespace {

// Residual evaluation result: projected [mean, modes...] vector(s) plus the
// sup norm of the raw trace residual.
struct ResidualEval {
    Eigen::VectorXd proj;
    double sup = 0.0;
};

using ResidualFn = std::function<ResidualEval(const Eigen::VectorXd&)>;

struct NewtonOutcome {
    Eigen::VectorXd x;
    int iters = 0;
    int max_dampings = 0;
    double residual_sup = 0.0;
};

// Damped Newton iteration with forward-difference Jacobian, frozen within a
// step and rebuilt when damping stalls. Steps are solved by truncated SVD so
// that exactly degenerate directions (rigid translations of the pair problem)
// are handled by the least-norm update.
NewtonOutcome damped_newton(const ResidualFn& residual, Eigen::VectorXd x,
                            const NewtonOptions& opts) {
    ResidualEval cur = residual(x);
    NewtonOutcome out;
    out.x = x;
    out.residual_sup = cur.sup;

    Eigen::MatrixXd jac;
    bool jac_fresh = false;
    auto build_jacobian = [&](const Eigen::VectorXd& at, const ResidualEval& f0) {
        jac.resize(f0.proj.size(), at.size());
        for (int c = 0; c < at.size(); ++c) {
            double h = opts.fd_step * std::max(1.0, std::abs(at(c)));
            Eigen::VectorXd xp = at;
            xp(c) += h;
            jac.col(c) = (residual(xp).proj - f0.proj) / h;
        }
        jac_fresh = true;
    };

    for (int it = 0; it < opts.max_iters; ++it) {
        if (cur.sup < opts.tol) {
            out.x = x;
            out.iters = it;
            out.residual_sup = cur.sup;
            return out;
        }
        if (jac.size() == 0) build_jacobian(x, cur);

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(
            jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        Eigen::VectorXd step = svd.solve(-cur.proj);
        if (!step.allFinite()) throw SolverError("newton step is not finite");

        bool accepted = false;
        int dampings = 0;
        double alpha = 1.0;
        for (; dampings <= 2; ++dampings, alpha *= 0.5) {
            ResidualEval next;
            try {
                next = residual(x + alpha * step);
            } catch (const GeometryError&) {
                continue;  // trial left the admissible set; damp further
            }
            if (next.sup < cur.sup || next.sup < opts.tol) {
                x += alpha * step;
                cur = next;
                accepted = true;
                out.max_dampings = std::max(out.max_dampings, dampings);
                break;
            }
        }
        if (accepted) {
            // chord method: keep the Jacobian until damping stalls
            jac_fresh = false;
            continue;
        }
        if (!jac_fresh) {
            build_jacobian(x, cur);
            continue;  // retry with a fresh Jacobian
        }
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3e", cur.sup);
            throw DivergenceError(
                std::string("newton iteration stalled at residual ") + buf,
                cur.sup);
        }
    }
    if (cur.sup < opts.tol) {
        out.x = x;
        out.iters = opts.max_iters;
        out.residual_sup = cur.sup;
        return out;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", cur.sup);
    throw DivergenceError(
        std::string("newton failed to converge within max_iters, residual ") +
            buf,
        cur.sup);
}

CosineSeries series_from_modes(const Eigen::VectorXd& x, int offset,
                               const std::vector<int>& modes, int K) {
    CosineSeries s = CosineSeries::zero(K);
    for (size_t i = 0; i < modes.size(); ++i) s.set_coeff(modes[i], x(offset + i));
    return s;
}

// project trace-residual samples into [mean, selected modes]
Eigen::VectorXd pack_projection(const std::vector<double>& samples,
                                const std::vector<int>& modes, int K) {
    auto proj = project_to_cosines(samples, K);
    Eigen::VectorXd v(modes.size() + 1);
    v(0) = proj.mean;
    for (size_t i = 0; i < modes.size(); ++i)
        v(i + 1) = proj.modes.coeff(modes[i]);
    return v;
}

// mode set compatible with the forcing parity: all modes, or even modes only
std::vector<int> stability_modes(int K, bool even_only) {
    std::vector<int> m;
    for (int k = even_only ? 2 : 1; k <= K; k += even_only ? 2 : 1)
        m.push_back(k);
    return m;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// When the forcing carries only even modes, the whole solve stays in the
// pi-periodic (even-mode) subspace: products of even-mode cosines never
// excite odd modes. Degeneracy of an odd mode is then harmless.
bool even_modes_only(const CosineSeries& s) {
    for (int k = 1; k <= s.order(); k += 2)
        if (s.coeff(k) != 0.0) return false;
    return true;
}

// up-front spectral degeneracy checks (implicit-function hypotheses)
void check_nondegenerate_single(double lambda, double gamma, int K,
                                bool skip_odd) {
    for (int k = 1; k <= K; ++k) {
        if (skip_odd && k % 2 == 1) continue;
        double v = dispersion_single(k, lambda, gamma);
        double dv = (dispersion_single(k, lambda, gamma + 0.5) -
                     dispersion_single(k, lambda, gamma - 0.5));
        if (std::abs(v) < 1e-3 * std::max(1.0, std::abs(dv)))
            throw DegenerateParameterError(
                "dispersion nearly vanishes at mode " + std::to_string(k) +
                    "; gamma is within ~1e-3 of a bifurcation value",
                k);
    }
}

void check_nondegenerate_two_phase(double lambda, double gamma1, double gamma2,
                                   int K, bool skip_odd) {
    for (int k = 1; k <= K; ++k) {
        if (skip_odd && k % 2 == 1) continue;
        double v = dispersion_two_phase(k, lambda, gamma1, gamma2);
        double dv = (dispersion_two_phase(k, lambda, gamma1, gamma2 + 0.5) -
                     dispersion_two_phase(k, lambda, gamma1, gamma2 - 0.5));
        if (std::abs(v) < 1e-3 * std::max(1.0, std::abs(dv)))
            throw DegenerateParameterError(
                "two-phase dispersion nearly vanishes at mode " +
                    std::to_string(k),
                k);
    }
}

void check_nondegenerate_pair(double lambda, double gamma, int K, bool skip_odd) {
    for (int k = 1; k <= K; ++k) {
        if (skip_odd && k % 2 == 1) continue;
        if (std::abs(pair_matrix(k, lambda, gamma).det_scaled()) < 1e-8)
            throw DegenerateParameterError(
                "pair linearized matrix is singular at mode " + std::to_string(k),
                k);
    }
}

}  // namespace

StabilityResult newton_solve_G(double lambda, double gamma, const CosineSeries& rho,
                               const NewtonOptions& opts) {
    const int K = opts.n_modes;
    const bool even_only = even_modes_only(rho);
    check_nondegenerate_single(lambda, gamma, K, even_only);
    const std::vector<int> modes = stability_modes(K, even_only);
    const double q2 = bernoulli_constant(lambda, gamma);
    const int n = opts.solver.n_angular;
    std::vector<double> rho_s = rho.samples(n);

    ResidualFn residual = [&](const Eigen::VectorXd& x) {
        AnnulusGeometry geom(lambda, series_from_modes(x, 1, modes, K),
                             CosineSeries());
        auto sol = solve_dirichlet(geom, gamma, opts.solver);
        auto t = sol.outer_trace(n);
        for (int j = 0; j < n; ++j) t[j] = t[j] * t[j] - (q2 + x(0)) - rho_s[j];
        ResidualEval ev;
        ev.proj = pack_projection(t, modes, K);
        ev.sup = sup_abs(t);
        return ev;
    };

    auto nw = damped_newton(
        residual, Eigen::VectorXd::Zero(static_cast<int>(modes.size()) + 1), opts);

    StabilityResult res;
    res.rho = rho;
    res.eta = series_from_modes(nw.x, 1, modes, K);
    res.bernoulli_correction = nw.x(0);
    res.newton_iters = nw.iters;
    res.max_dampings = nw.max_dampings;
    res.residual_sup = nw.residual_sup;
    res.predicted = CosineSeries::zero(K);
    for (int k = 1; k <= K; ++k) {
        double tau = rho.coeff(k);
        if (tau != 0.0)
            res.predicted.set_coeff(
                k, tau / linearization_eigenvalue_single(k, lambda, gamma));
    }
    return res;
}

StabilityResult newton_solve_H(double lambda, double gamma1, double gamma2,
                               const CosineSeries& rho,
                               const NewtonOptions& opts) {
    const int K = opts.n_modes;
    const bool even_only = even_modes_only(rho);
    check_nondegenerate_two_phase(lambda, gamma1, gamma2, K, even_only);
    const std::vector<int> modes = stability_modes(K, even_only);
    const double q2 = bernoulli_constant_two_phase(gamma2);
    const int n = opts.solver.n_angular;
    std::vector<double> rho_s = rho.samples(n);

    ResidualFn residual = [&](const Eigen::VectorXd& x) {
        AnnulusGeometry geom(lambda, series_from_modes(x, 1, modes, K),
                             CosineSeries());
        auto sol = solve_transmission(geom, gamma1, gamma2, opts.solver);
        auto t = sol.outer_trace(n);
        for (int j = 0; j < n; ++j) t[j] = t[j] * t[j] - (q2 + x(0)) - rho_s[j];
        ResidualEval ev;
        ev.proj = pack_projection(t, modes, K);
        ev.sup = sup_abs(t);
        return ev;
    };

    auto nw = damped_newton(
        residual, Eigen::VectorXd::Zero(static_cast<int>(modes.size()) + 1), opts);

    StabilityResult res;
    res.rho = rho;
    res.eta = series_from_modes(nw.x, 1, modes, K);
    res.bernoulli_correction = nw.x(0);
    res.newton_iters = nw.iters;
    res.max_dampings = nw.max_dampings;
    res.residual_sup = nw.residual_sup;
    res.predicted = CosineSeries::zero(K);
    for (int k = 1; k <= K; ++k) {
        double tau = rho.coeff(k);
        if (tau != 0.0)
            res.predicted.set_coeff(
                k,
                tau / linearization_eigenvalue_two_phase(k, lambda, gamma1, gamma2));
    }
    return res;
}

PairStabilityResult newton_solve_calG(double lambda, double gamma,
                                      const CosineSeries& rho_out,
                                      const CosineSeries& rho_in,
                                      const NewtonOptions& opts) {
    const int K = opts.n_modes;
    const bool even_only = even_modes_only(rho_out) && even_modes_only(rho_in);
    check_nondegenerate_pair(lambda, gamma, K, even_only);
    const std::vector<int> modes = stability_modes(K, even_only);
    const int nm = static_cast<int>(modes.size());
    auto q = neumann_constants(lambda, gamma);
    const int n = opts.solver.n_angular;
    std::vector<double> ro = rho_out.samples(n);
    std::vector<double> ri = rho_in.samples(n);

    // unknowns: [dq_out, dq_in, a-modes, b-modes]
    ResidualFn residual = [&](const Eigen::VectorXd& x) {
        AnnulusGeometry geom(lambda, series_from_modes(x, 2, modes, K),
                             series_from_modes(x, 2 + nm, modes, K));
        auto sol = solve_dirichlet(geom, gamma, opts.solver);
        auto tout = sol.outer_trace(n);
        auto tin = sol.inner_trace(n);
        for (int j = 0; j < n; ++j) {
            tout[j] -= q.outer + x(0) + ro[j];
            tin[j] -= q.inner + x(1) + ri[j];
        }
        ResidualEval ev;
        Eigen::VectorXd po = pack_projection(tout, modes, K);
        Eigen::VectorXd pi = pack_projection(tin, modes, K);
        ev.proj.resize(2 * nm + 2);
        ev.proj << po, pi;
        ev.sup = std::max(sup_abs(tout), sup_abs(tin));
        return ev;
    };

    auto nw = damped_newton(residual, Eigen::VectorXd::Zero(2 * nm + 2), opts);

    PairStabilityResult res;
    res.rho_out = rho_out;
    res.rho_in = rho_in;
    res.eta = series_from_modes(nw.x, 2, modes, K);
    res.xi = series_from_modes(nw.x, 2 + nm, modes, K);
    res.dq_out = nw.x(0);
    res.dq_in = nw.x(1);
    res.newton_iters = nw.iters;
    res.max_dampings = nw.max_dampings;
    res.residual_sup = nw.residual_sup;
    res.predicted_eta = CosineSeries::zero(K);
    res.predicted_xi = CosineSeries::zero(K);
    for (int k = 1; k <= K; ++k) {
        Eigen::Vector2d tau(rho_out.coeff(k), rho_in.coeff(k));
        if (tau.norm() == 0.0) continue;
        Eigen::Matrix2d m = pair_jacobian_geometric(k, lambda, gamma);
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(
            m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-12);
        Eigen::Vector2d ab = svd.solve(tau);
        res.predicted_eta.set_coeff(k, ab(0));
        res.predicted_xi.set_coeff(k, ab(1));
    }
    return res;
}

std::vector<double> detect_bifurcation(ProblemKind kind, int k, double lambda,
                                       double gamma1) {
    switch (kind) {
        case ProblemKind::single_phase:
            return {bifurcation_gamma_single(k, lambda)};
        case ProblemKind::two_phase:
            return {bifurcation_gamma2_two_phase(k, lambda, gamma1)};
        case ProblemKind::pair: {
            auto roots = pair_bifurcation_gammas(k, lambda);
            if (!roots.real) return {};
            return {roots.gamma_star, roots.gamma_star2};
        }
    }
    return {};
}

std::vector<double> detect_bifurcation_in(ProblemKind kind, int k, double lambda,
                                          double lo, double hi, double gamma1) {
    auto f = [&](double g) -> double {
        switch (kind) {
            case ProblemKind::single_phase:
                return dispersion_single(k, lambda, g);
            case ProblemKind::two_phase:
                return dispersion_two_phase(k, lambda, gamma1, g);
            case ProblemKind::pair:
                return pair_matrix(k, lambda, g).det_scaled();
        }
        return 0.0;
    };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return {lo};
    if (fhi == 0.0) return {hi};
    if (flo * fhi > 0.0) return {};  // not-found report
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return {mid};
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return {0.5 * (lo + hi)};
}

namespace {

// Branch corrector: solve the overdetermined residual with the k0-mode of eta
// pinned to s and gamma free. The branch lives in the Z_{k0}-symmetric
// subspace, so only multiples of k0 enter as unknowns; the residual sup-norm
// still covers all angular content, so a symmetry violation would show up as
// non-convergence.
struct BranchContext {
    ProblemKind kind;
    int k0;
    double lambda;
    double gamma1_two_phase;
    int K;
    NewtonOptions newton;
    std::vector<int> modes;       // multiples of k0 up to K
    std::vector<int> free_modes;  // modes without k0 itself

    void init_modes() {
        modes.clear();
        free_modes.clear();
        for (int m = k0; m <= K; m += k0) {
            modes.push_back(m);
            if (m != k0) free_modes.push_back(m);
        }
    }

    int n_unknowns() const {
        int nf = static_cast<int>(free_modes.size());
        int nm = static_cast<int>(modes.size());
        return kind == ProblemKind::pair ? 3 + nf + nm : 2 + nf;
    }

    // unknown layout:
    //   single/two-phase: [gamma, dQ, a_m (m in free_modes)]
    //   pair:             [gamma, dq_out, dq_in, a_m (free), b_m (modes)]
    CosineSeries eta_of(const Eigen::VectorXd& x, double s) const {
        CosineSeries eta = CosineSeries::zero(K);
        eta.set_coeff(k0, s);
        int idx = kind == ProblemKind::pair ? 3 : 2;
        for (int m : free_modes) eta.set_coeff(m, x(idx++));
        return eta;
    }
    CosineSeries xi_of(const Eigen::VectorXd& x) const {
        CosineSeries xi = CosineSeries::zero(K);
        if (kind != ProblemKind::pair) return xi;
        int idx = 3 + static_cast<int>(free_modes.size());
        for (int m : modes) xi.set_coeff(m, x(idx++));
        return xi;
    }

    ResidualEval residual(const Eigen::VectorXd& x, double s) const {
        const int n = newton.solver.n_angular;
        double gamma = x(0);
        CosineSeries eta = eta_of(x, s);
        ResidualEval ev;
        switch (kind) {
            case ProblemKind::single_phase: {
                AnnulusGeometry geom(lambda, eta, CosineSeries());
                auto sol = solve_dirichlet(geom, gamma, newton.solver);
                double q2 = bernoulli_constant(lambda, gamma);
                auto t = sol.outer_trace(n);
                for (double& v : t) v = v * v - (q2 + x(1));
                ev.proj = pack_projection(t, modes, K);
                ev.sup = sup_abs(t);
                return ev;
            }
            case ProblemKind::two_phase: {
                AnnulusGeometry geom(lambda, eta, CosineSeries());
                auto sol =
                    solve_transmission(geom, gamma1_two_phase, gamma, newton.solver);
                double q2 = bernoulli_constant_two_phase(gamma);
                auto t = sol.outer_trace(n);
                for (double& v : t) v = v * v - (q2 + x(1));
                ev.proj = pack_projection(t, modes, K);
                ev.sup = sup_abs(t);
                return ev;
            }
            case ProblemKind::pair: {
                AnnulusGeometry geom(lambda, eta, xi_of(x));
                auto sol = solve_dirichlet(geom, gamma, newton.solver);
                auto q = neumann_constants(lambda, gamma);
                auto tout = sol.outer_trace(n);
                auto tin = sol.inner_trace(n);
                for (double& v : tout) v -= q.outer + x(1);
                for (double& v : tin) v -= q.inner + x(2);
                Eigen::VectorXd po = pack_projection(tout, modes, K);
                Eigen::VectorXd pi = pack_projection(tin, modes, K);
                ev.proj.resize(po.size() + pi.size());
                ev.proj << po, pi;
                ev.sup = std::max(sup_abs(tout), sup_abs(tin));
                return ev;
            }
        }
        throw ConfigError("unknown problem kind");
    }

    BranchPoint make_point(const Eigen::VectorXd& x, double s,
                           const NewtonOutcome& nw) const {
        BranchPoint p;
        p.s = s;
        p.gamma = x(0);
        p.eta = eta_of(x, s);
        p.xi = xi_of(x);
        p.q_adjust_outer = x(1);
        p.q_adjust_inner = kind == ProblemKind::pair ? x(2) : 0.0;
        p.residual_sup = nw.residual_sup;
        p.newton_iters = nw.iters;
        return p;
    }

    Eigen::VectorXd pack(const BranchPoint& p) const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_unknowns());
        x(0) = p.gamma;
        x(1) = p.q_adjust_outer;
        int idx = 2;
        if (kind == ProblemKind::pair) {
            x(2) = p.q_adjust_inner;
            idx = 3;
        }
        for (int m : free_modes) x(idx++) = p.eta.coeff(m);
        if (kind == ProblemKind::pair)
            for (int m : modes) x(idx++) = p.xi.coeff(m);
        return x;
    }
};

double top_quartile_energy(const CosineSeries& s) {
    int K = s.order();
    int from = std::max(1, (3 * K) / 4);
    double e = 0.0;
    for (int k = from; k <= K; ++k) e += s.coeff(k) * s.coeff(k);
    return std::sqrt(e);
}

}  // namespace

Branch trace_branch(ProblemKind kind, int k0, double lambda, double gamma0,
                    double ds, int n_steps, double gamma1_two_phase,
                    const BranchOptions& opts) {
    if (k0 < 1 || k0 > opts.newton.n_modes)
        throw ConfigError("bifurcation mode must lie within the truncation");

    Branch branch;
    branch.kind = kind;
    branch.k0 = k0;
    branch.lambda = lambda;
    branch.gamma0 = gamma0;
    branch.gamma1_two_phase = gamma1_two_phase;
    branch.mode_truncation = opts.newton.n_modes;

    BranchContext ctx{kind,        k0,          lambda, gamma1_two_phase,
                      opts.newton.n_modes, opts.newton, {},     {}};
    ctx.init_modes();

    // trivial point at s = 0
    {
        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(ctx.n_unknowns());
        x0(0) = gamma0;
        auto ev = ctx.residual(x0, 0.0);
        NewtonOutcome nw;
        nw.x = x0;
        nw.residual_sup = ev.sup;
        branch.points.push_back(ctx.make_point(x0, 0.0, nw));
    }

    // kernel direction for the first predictor
    double beta_over_alpha = 0.0;
    if (kind == ProblemKind::pair) {
        auto v = null_vector(pair_matrix(k0, lambda, gamma0).matrix());
        beta_over_alpha = v(1) / v(0);
    }

    for (int step = 1; step <= n_steps; ++step) {
        double s_target = step * ds;
        const BranchPoint& prev = branch.points.back();

        // secant predictor through the last two points (kernel direction for
        // the first step)
        Eigen::VectorXd guess = ctx.pack(prev);
        if (branch.points.size() >= 2) {
            const BranchPoint& prev2 = branch.points[branch.points.size() - 2];
            double den = prev.s - prev2.s;
            if (std::abs(den) > 1e-14) {
                Eigen::VectorXd d =
                    (ctx.pack(prev) - ctx.pack(prev2)) / den * (s_target - prev.s);
                guess += d;
            }
        } else if (kind == ProblemKind::pair) {
            // xi follows the kernel ratio
            int xi_base = 3 + static_cast<int>(ctx.free_modes.size());
            guess(xi_base) += beta_over_alpha * (s_target - prev.s);
        }

        bool accepted = false;
        double s_from = prev.s;
        Eigen::VectorXd x_from = ctx.pack(prev);
        Eigen::VectorXd try_guess = guess;
        int halvings = 0;
        while (!accepted) {
            try {
                ResidualFn f = [&](const Eigen::VectorXd& x) {
                    return ctx.residual(x, s_target);
                };
                auto nw = damped_newton(f, try_guess, ctx.newton);
                branch.points.push_back(ctx.make_point(nw.x, s_target, nw));
                accepted = true;
            } catch (const DivergenceError&) {
                // halve the predictor step: converge an intermediate point and
                // predict the target from there
                if (++halvings > opts.max_halvings) {
                    branch.terminated_early = true;
                    branch.termination_reason =
                        "newton divergence below minimum step at s = " +
                        std::to_string(s_target);
                    return branch;
                }
                double s_mid = 0.5 * (s_from + s_target);
                try {
                    Eigen::VectorXd mid_guess =
                        x_from + (try_guess - x_from) * (s_mid - s_from) /
                                     (s_target - s_from);
                    ResidualFn fm = [&](const Eigen::VectorXd& x) {
                        return ctx.residual(x, s_mid);
                    };
                    auto nm = damped_newton(fm, mid_guess, ctx.newton);
                    // extrapolate the new pair of points to the target
                    try_guess = nm.x + (nm.x - x_from) * (s_target - s_mid) /
                                           (s_mid - s_from);
                    x_from = nm.x;
                    s_from = s_mid;
                } catch (const DivergenceError&) {
                    branch.terminated_early = true;
                    branch.termination_reason =
                        "newton divergence at intermediate step s = " +
                        std::to_string(s_mid);
                    return branch;
                }
            }
        }

        // a-posteriori spectral adequacy: top-quartile mode energy must stay
        // small, otherwise re-run the point with a doubled truncation
        const BranchPoint& accepted_pt = branch.points.back();
        double tail = std::max(top_quartile_energy(accepted_pt.eta),
                               top_quartile_energy(accepted_pt.xi));
        if (tail > opts.tail_energy_tol) {
            BranchOptions grown = opts;
            if (opts.max_truncation_doublings <= 0)
                throw SolverError(
                    "mode truncation exhausted: top-quartile energy " +
                    std::to_string(tail));
            grown.newton.n_modes *= 2;
            grown.newton.solver.n_angular *= 2;
            grown.max_truncation_doublings = opts.max_truncation_doublings - 1;
            return trace_branch(kind, k0, lambda, gamma0, ds, n_steps,
                                gamma1_two_phase, grown);
        }
    }
    return branch;
}

NontrivialityReport verify_branch_nontriviality(const Branch& branch) {
    NontrivialityReport rep;
    if (branch.points.size() < 3) {
        rep.detail = "branch too short";
        return rep;
    }
    rep.min_sup_ratio = 1e300;
    for (size_t i = 1; i < branch.points.size(); ++i) {
        const auto& p = branch.points[i];
        rep.max_residual = std::max(rep.max_residual, p.residual_sup);
        rep.min_sup_ratio =
            std::min(rep.min_sup_ratio, p.eta.sup_norm() / std::abs(p.s));
    }

    // off-mode energy at s_max vs s_max/2 (quadratic => ratio ~ 4)
    auto offmode = [&](const BranchPoint& p) {
        double e = 0.0;
        for (int k = 1; k <= p.eta.order(); ++k)
            if (k != branch.k0) e += p.eta.coeff(k) * p.eta.coeff(k);
        for (int k = 1; k <= p.xi.order(); ++k)
            if (k != branch.k0) e += p.xi.coeff(k) * p.xi.coeff(k);
        return std::sqrt(e);
    };
    size_t last = branch.points.size() - 1;
    size_t mid = last / 2;
    double e_last = offmode(branch.points[last]);
    double e_mid = offmode(branch.points[mid]);
    rep.offmode_energy_ratio = e_mid > 0.0 ? e_last / e_mid : 0.0;

    const auto& first = branch.points[1];
    rep.kernel_ratio = branch.kind == ProblemKind::pair
                           ? first.xi.coeff(branch.k0) / first.eta.coeff(branch.k0)
                           : 0.0;

    rep.ok = rep.min_sup_ratio >= 0.9 && rep.max_residual < 1e-9;
    rep.detail = rep.ok ? "branch points nontrivial and converged"
                        : "branch failed the dominance or residual check";
    return rep;
}

}  // namespace annular
