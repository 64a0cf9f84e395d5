#ifndef ANNULAR_ERRORS_HPP
#define ANNULAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace annular {

// Bad run configuration (grids, truncations, tolerances).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Boundary curves out of order, self-intersecting, or otherwise invalid.
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the domain of a closed-form profile.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Degenerate parameter combination (vanishing denominator, singular mode).
struct DegenerateParameterError : std::runtime_error {
    int mode = -1;
    explicit DegenerateParameterError(const std::string& msg, int k = -1)
        : std::runtime_error(msg), mode(k) {}
};

// Linear system solve failed or produced an unusable solution.
struct SolverError : std::runtime_error {
    double diagnostic = 0.0;  // e.g. interior PDE residual of the failed solve
    explicit SolverError(const std::string& msg, double diag = 0.0)
        : std::runtime_error(msg), diagnostic(diag) {}
};

// Newton iteration failed to converge within the allowed iterations.
struct DivergenceError : std::runtime_error {
    double residual = 0.0;
    explicit DivergenceError(const std::string& msg, double res = 0.0)
        : std::runtime_error(msg), residual(res) {}
};

}  // namespace annular

#endif
