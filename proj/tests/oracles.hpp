#ifndef ANNULAR_TEST_ORACLES_HPP
#define ANNULAR_TEST_ORACLES_HPP

// Test-only oracles, independent of the library implementation paths they
// check: trapezoid quadrature projection, an RK4 shooting integrator for the
// radial ODE, small dense boundary systems for the harmonic mode
// coefficients, and a bisection root finder.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// cosine coefficient a_k of f via trapezoid quadrature on a dense grid
inline double cosine_coefficient(const std::function<double(double)>& f, int k,
                                 int n = 4096) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = kTwoPi * j / n;
        acc += f(th) * std::cos(k * th);
    }
    return (k == 0 ? 1.0 : 2.0) * acc / n;
}

// Integrate psi'' + psi'/r = gamma from r=a with psi(a)=va, psi'(a)=da (RK4).
inline std::pair<double, double> integrate_radial(double gamma, double a,
                                                  double va, double da, double b,
                                                  int steps = 20000) {
    double h = (b - a) / steps;
    double y = va, v = da, r = a;
    auto f = [gamma](double rr, double vv) { return gamma - vv / rr; };
    for (int i = 0; i < steps; ++i) {
        double k1y = v, k1v = f(r, v);
        double k2y = v + 0.5 * h * k1v, k2v = f(r + 0.5 * h, v + 0.5 * h * k1v);
        double k3y = v + 0.5 * h * k2v, k3v = f(r + 0.5 * h, v + 0.5 * h * k2v);
        double k4y = v + h * k3v, k4v = f(r + h, v + h * k3v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += h;
    }
    return {y, v};
}

// Shooting solve of psi'' + psi'/r = gamma on [lambda,1] with psi(lambda)=1,
// psi(1)=0; returns psi(r_query).
inline double radial_shooting(double gamma, double lambda, double r_query) {
    auto end_value = [&](double slope) {
        return integrate_radial(gamma, lambda, 1.0, slope, 1.0).first;
    };
    // secant iteration on the initial slope
    double s0 = -1.0, s1 = -2.0;
    double f0 = end_value(s0), f1 = end_value(s1);
    for (int it = 0; it < 60 && std::abs(f1) > 1e-14; ++it) {
        double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
        s0 = s1;
        f0 = f1;
        s1 = s2;
        f1 = end_value(s1);
    }
    return integrate_radial(gamma, lambda, 1.0, s1, r_query).first;
}

// Bisection for a bracketed root.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change");
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Mode-k boundary system of the single-phase shape derivative:
//   S(1) = -q_out, S(lambda) = 0 with S(r) = A r^{-k} + B r^{k}.
inline std::pair<double, double> single_mode_system(int k, double lambda,
                                                    double q_out) {
    Eigen::Matrix2d m;
    m << 1.0, 1.0, std::pow(lambda, -k), std::pow(lambda, k);
    Eigen::Vector2d rhs(-q_out, 0.0);
    Eigen::Vector2d sol = m.partialPivLu().solve(rhs);
    return {sol(0), sol(1)};
}

// Mode-k interface system of the transmission shape derivative:
// unknowns (D,E,F) with
//   E + F = -gamma2/2
//   D l^k - E l^-k - F l^k = 0
//   (g2/g1) D l^{k-1} + E l^{-k-1} - F l^{k-1} = 0.
inline Eigen::Vector3d two_phase_mode_system(int k, double lambda, double g1,
                                             double g2) {
    Eigen::Matrix3d m;
    double lk = std::pow(lambda, k), lmk = std::pow(lambda, -k);
    m << 0.0, 1.0, 1.0,
         lk, -lmk, -lk,
         (g2 / g1) * lk / lambda, lmk / lambda, -lk / lambda;
    Eigen::Vector3d rhs(-g2 / 2.0, 0.0, 0.0);
    return m.partialPivLu().solve(rhs);
}

}  // namespace oracle

#endif
