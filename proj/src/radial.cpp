#include "annular/radial.hpp"

#include <cmath>
#include <string>

#include "annular/errors.hpp"

namespace annular {

namespace {
// C = (4 + (1-lambda^2) gamma) / (4 ln lambda)
double log_coefficient(double lambda, double gamma) {
    return (4.0 + (1.0 - lambda * lambda) * gamma) / (4.0 * std::log(lambda));
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw DomainError("lambda must lie in (0,1), got " + std::to_string(lambda));
}
}  // namespace

double RadialProfile::gamma_at(double r) const {
    if (kind == ProfileKind::single_phase) return gamma1;
    return r < lambda ? gamma1 : gamma2;
}

double trivial_stream(const RadialProfile& p, double r) {
    check_lambda(p.lambda);
    if (p.kind == ProfileKind::single_phase) {
        if (r < p.lambda || r > 1.0)
            throw DomainError("radius outside annulus [lambda,1]");
        double c = log_coefficient(p.lambda, p.gamma1);
        return c * std::log(r) - p.gamma1 * (1.0 - r * r) / 4.0;
    }
    if (r < 0.0 || r > 1.0) throw DomainError("radius outside disk [0,1]");
    double l2 = p.lambda * p.lambda;
    if (r < p.lambda)
        return -((1.0 - l2) * p.gamma2 + (l2 - r * r) * p.gamma1) / 4.0;
    return -(1.0 - r * r) * p.gamma2 / 4.0;
}

double trivial_stream_dr(const RadialProfile& p, double r) {
    check_lambda(p.lambda);
    if (p.kind == ProfileKind::single_phase) {
        if (r < p.lambda || r > 1.0)
            throw DomainError("radius outside annulus [lambda,1]");
        return log_coefficient(p.lambda, p.gamma1) / r + p.gamma1 * r / 2.0;
    }
    if (r < 0.0 || r > 1.0) throw DomainError("radius outside disk [0,1]");
    return (r < p.lambda ? p.gamma1 : p.gamma2) * r / 2.0;
}

double trivial_stream_drr(const RadialProfile& p, double r) {
    check_lambda(p.lambda);
    if (p.kind == ProfileKind::single_phase) {
        if (r < p.lambda || r > 1.0)
            throw DomainError("radius outside annulus [lambda,1]");
        return -log_coefficient(p.lambda, p.gamma1) / (r * r) + p.gamma1 / 2.0;
    }
    if (r < 0.0 || r > 1.0) throw DomainError("radius outside disk [0,1]");
    return (r < p.lambda ? p.gamma1 : p.gamma2) / 2.0;
}

double bernoulli_constant(double lambda, double gamma) {
    check_lambda(lambda);
    double q = log_coefficient(lambda, gamma) + gamma / 2.0;
    return q * q;
}

double bernoulli_constant_two_phase(double gamma2) {
    return gamma2 * gamma2 / 4.0;
}

NeumannConstants neumann_constants(double lambda, double gamma) {
    check_lambda(lambda);
    double c = log_coefficient(lambda, gamma);
    return {c + gamma / 2.0, -c / lambda - gamma * lambda / 2.0};
}

}  // namespace annular
