#include "resample/core/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "resample/core/error.hpp"

namespace resample {

void NeumaierSum::add(double x) noexcept
{
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept
{
    NeumaierSum acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.value();
}

double normal_cdf(double x) noexcept
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double bivariate_normal_upper_orthant(double h, double rho)
{
    if (!(rho >= -1.0 && rho <= 1.0)) {
        fail(ErrorKind::invalid_input, "correlation outside [-1, 1]");
    }
    const double upper = 1.0 - normal_cdf(h);
    if (rho >= 1.0) {
        return upper;
    }
    if (rho <= -1.0) {
        return std::max(0.0, 1.0 - 2.0 * normal_cdf(h));
    }
    // Condition on Z1 = z: P{Z2 > h | z} = Phi((rho z - h) / sqrt(1 - rho^2)).
    const double scale = std::sqrt(1.0 - rho * rho);
    auto integrand = [&](double z) {
        const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        return density * normal_cdf((rho * z - h) / scale);
    };
    const double lo = h;
    const double hi = std::max(h, 0.0) + 40.0;
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, lo, hi, 20, 1e-14, &error);
    return std::clamp(value, 0.0, upper);
}

double poisson_pmf(std::size_t j, double mean)
{
    if (mean < 0.0) {
        fail(ErrorKind::invalid_input, "Poisson mean must be non-negative");
    }
    if (mean == 0.0) {
        return j == 0 ? 1.0 : 0.0;
    }
    const double jd = static_cast<double>(j);
    return std::exp(jd * std::log(mean) - mean - std::lgamma(jd + 1.0));
}

double poisson_tail_above(std::size_t k, double mean)
{
    if (mean < 0.0) {
        fail(ErrorKind::invalid_input, "Poisson mean must be non-negative");
    }
    if (mean == 0.0) {
        return 0.0;
    }
    return boost::math::gamma_p(static_cast<double>(k) + 1.0, mean);
}

}  // namespace resample
