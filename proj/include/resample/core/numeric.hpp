#pragma once

#include <cstddef>
#include <span>

namespace resample {

/// Neumaier-compensated accumulator. Order of add() calls still matters for
/// the last bit, so callers that promise bit-identical results reduce in a
/// fixed order.
class NeumaierSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

/// Standard normal CDF through erfc, accurate to a few ulps in both tails.
double normal_cdf(double x) noexcept;

/// P{Z1 > h, Z2 > h} for a standard bivariate normal with correlation rho.
double bivariate_normal_upper_orthant(double h, double rho);

double poisson_pmf(std::size_t j, double mean);

/// P{N > k} for N ~ Poisson(mean), via the regularized incomplete gamma
/// function so small tails keep full relative precision.
double poisson_tail_above(std::size_t k, double mean);

}  // namespace resample
