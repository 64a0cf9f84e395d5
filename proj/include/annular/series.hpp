#ifndef ANNULAR_SERIES_HPP
#define ANNULAR_SERIES_HPP

#include <span>
#include <vector>

namespace annular {

// Zero-mean even angular function represented by truncated cosine
// coefficients: f(theta) = sum_{k=1}^{K} a_k cos(k theta).
// The k=0 term is structurally absent, so the circular mean vanishes
// exactly. Used for boundary perturbations and Neumann-data
// perturbations alike.
class CosineSeries {
  public:
    CosineSeries() = default;
    explicit CosineSeries(std::vector<double> coeffs) : a_(std::move(coeffs)) {}

    static CosineSeries zero(int order);
    // amplitude * cos(k theta), truncated at max(order, k).
    static CosineSeries harmonic(int k, double amplitude, int order = 0);

    int order() const { return static_cast<int>(a_.size()); }
    const std::vector<double>& coeffs() const { return a_; }

    // 1-based mode access; modes outside the truncation read as zero.
    double coeff(int k) const;
    void set_coeff(int k, double value);

    double operator()(double theta) const;   // f(theta)
    double deriv(double theta) const;        // f'(theta)
    double deriv2(double theta) const;       // f''(theta)

    // Samples on the uniform full-circle grid theta_j = 2 pi j / n.
    std::vector<double> samples(int n) const;

    double sup_norm(int n_grid = 1024) const;  // max |f| over a uniform grid
    double l2_norm() const;                    // sqrt(sum a_k^2)
    double coeff_abs_sum() const;              // sum |a_k| (rigorous sup bound)

    bool is_zero(double tol = 0.0) const;

    CosineSeries& operator+=(const CosineSeries& other);
    CosineSeries& operator*=(double factor);
    friend CosineSeries operator+(CosineSeries lhs, const CosineSeries& rhs) {
        lhs += rhs;
        return lhs;
    }
    friend CosineSeries operator*(double factor, CosineSeries s) {
        s *= factor;
        return s;
    }

  private:
    std::vector<double> a_;
};

// Discrete cosine projection of samples on a uniform full-circle grid.
// The mean (k=0 coefficient) is returned separately so residual
// bookkeeping can pair it with a Bernoulli-constant unknown.
struct CosineProjection {
    double mean = 0.0;
    CosineSeries modes;
};

// Requires a uniform grid theta_j = 2 pi j / n with n >= 2*order + 1.
CosineProjection project_to_cosines(std::span<const double> samples, int order);

}  // namespace annular

#endif
