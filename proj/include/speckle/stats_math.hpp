#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace speckle {

/// Kahan-Babuska-Neumaier compensated accumulator. All metric and statistics
/// reductions in this project go through it, in index order, so results do
/// not depend on how work was split across threads.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Regularized upper incomplete gamma Q(a, x).
double igamc(double a, double x);
/// Regularized lower incomplete gamma P(a, x).
double igam(double a, double x);

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Upper-tail P-value of a chi-square statistic.
inline double chi_square_pvalue(double chi2, double dof) { return igamc(dof / 2.0, chi2 / 2.0); }

/// Chi-square P-value of observed counts against a uniform distribution over
/// all bins. Zero-expected bins are rejected via InvalidArgument.
double chi_square_uniform_pvalue(std::span<const uint64_t> counts);

/// Pearson product-moment correlation; empty when either side has zero
/// variance (undefined correlation).
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);
std::optional<double> pearson_bytes(std::span<const uint8_t> a, std::span<const uint8_t> b);

struct GaussianFit {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 0.0;    // standard-deviation parameter of the fitted curve
    double r_squared = 0.0;
    bool converged = false;
};

/// Least-squares fit of A*exp(-(x-c)^2/(2 w^2)) to (x, y) samples,
/// Levenberg-damped Gauss-Newton from moment-based initial values.
GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y);

/// Kolmogorov-Smirnov distance between a sample and the uniform [0,1] CDF.
double ks_uniform_distance(std::vector<double> sample);

}  // namespace speckle
