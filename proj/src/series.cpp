#include "annular/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "annular/errors.hpp"

namespace annular {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CosineSeries CosineSeries::zero(int order) {
    return CosineSeries(std::vector<double>(std::max(order, 0), 0.0));
}

CosineSeries CosineSeries::harmonic(int k, double amplitude, int order) {
    if (k < 1) throw ConfigError("cosine mode index must be >= 1");
    std::vector<double> c(std::max(order, k), 0.0);
    c[k - 1] = amplitude;
    return CosineSeries(std::move(c));
}

double CosineSeries::coeff(int k) const {
    if (k < 1 || k > order()) return 0.0;
    return a_[k - 1];
}

void CosineSeries::set_coeff(int k, double value) {
    if (k < 1) throw ConfigError("cosine mode index must be >= 1");
    if (k > order()) a_.resize(k, 0.0);
    a_[k - 1] = value;
}

double CosineSeries::operator()(double theta) const {
    double f = 0.0;
    for (int k = 1; k <= order(); ++k) f += a_[k - 1] * std::cos(k * theta);
    return f;
}

double CosineSeries::deriv(double theta) const {
    double f = 0.0;
    for (int k = 1; k <= order(); ++k) f -= a_[k - 1] * k * std::sin(k * theta);
    return f;
}

double CosineSeries::deriv2(double theta) const {
    double f = 0.0;
    for (int k = 1; k <= order(); ++k)
        f -= a_[k - 1] * static_cast<double>(k) * k * std::cos(k * theta);
    return f;
}

std::vector<double> CosineSeries::samples(int n) const {
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = (*this)(kTwoPi * j / n);
    return out;
}

double CosineSeries::sup_norm(int n_grid) const {
    double m = 0.0;
    for (int j = 0; j < n_grid; ++j)
        m = std::max(m, std::abs((*this)(kTwoPi * j / n_grid)));
    return m;
}

double CosineSeries::l2_norm() const {
    double s = 0.0;
    for (double c : a_) s += c * c;
    return std::sqrt(s);
}

double CosineSeries::coeff_abs_sum() const {
    double s = 0.0;
    for (double c : a_) s += std::abs(c);
    return s;
}

bool CosineSeries::is_zero(double tol) const {
    return std::all_of(a_.begin(), a_.end(),
                       [tol](double c) { return std::abs(c) <= tol; });
}

CosineSeries& CosineSeries::operator+=(const CosineSeries& other) {
    if (other.order() > order()) a_.resize(other.order(), 0.0);
    for (int k = 0; k < other.order(); ++k) a_[k] += other.a_[k];
    return *this;
}

CosineSeries& CosineSeries::operator*=(double factor) {
    for (double& c : a_) c *= factor;
    return *this;
}

CosineProjection project_to_cosines(std::span<const double> samples, int order) {
    const int n = static_cast<int>(samples.size());
    if (order < 0) throw ConfigError("cosine truncation order must be >= 0");
    if (n < 2 * order + 1)
        throw ConfigError("projection needs at least 2K+1 samples, got " +
                          std::to_string(n) + " for K=" + std::to_string(order));

    CosineProjection out;
    double mean = 0.0;
    for (double v : samples) mean += v;
    out.mean = mean / n;

    std::vector<double> c(order, 0.0);
    for (int k = 1; k <= order; ++k) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += samples[j] * std::cos(k * kTwoPi * j / n);
        c[k - 1] = 2.0 * acc / n;
    }
    out.modes = CosineSeries(std::move(c));
    return out;
}

}  // namespace annular
