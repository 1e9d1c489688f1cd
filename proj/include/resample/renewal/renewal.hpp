#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resample/core/report.hpp"
#include "resample/core/sample.hpp"

namespace resample::renewal {

/// 1 iff sum(x) > sum(y) strictly.
int psi(std::span<const double> x, std::span<const double> y);

/// Demand intervals H_X and supply intervals H_Y; Theta = P{D_mx > S_my}
/// where D and S are sums of mx demand and my supply intervals.
struct RenewalComparisonSpec {
    Sample demand;
    Sample supply;
    std::size_t m_x = 1;
    std::size_t m_y = 1;

    void validate() const;
};

/// Exact Theta for exponential intervals with rates (events per unit time).
double theta_exponential(double rate_x, double rate_y, std::size_t m_x, std::size_t m_y);

/// Exact Theta for normal intervals (sums are normal; negative intervals are
/// allowed).
double theta_normal(double mean_x, double sd_x, double mean_y, double sd_y,
                    std::size_t m_x, std::size_t m_y);

/// Rates estimated as n / sum, then the exponential formula.
EstimatorReport classical_theta_exponential(const RenewalComparisonSpec& spec);

/// Means and ML variances (divisor n), then the normal formula.
EstimatorReport classical_theta_normal(const RenewalComparisonSpec& spec);

/// Mean of psi over r realizations, each drawing m_x demand and m_y supply
/// values without replacement. Realization q uses stream (seed, q).
EstimatorReport resampling_theta(const RenewalComparisonSpec& spec, std::size_t realizations,
                                 std::uint64_t seed);

struct AlphaCell {
    std::size_t alpha_x = 0;
    std::size_t alpha_y = 0;
    double probability = 0.0;
    double conditional_moment = 0.0;
    /// Present when the cell was estimated by Monte Carlo.
    std::optional<double> standard_error;
};

struct AlphaVarianceResult {
    std::vector<AlphaCell> cells;
    double mu = 0.0;
    double mu11 = 0.0;
    /// The value subtracted as mu^2.
    double mu_squared = 0.0;
    /// Variance before clamping at zero.
    double raw_variance = 0.0;
    double variance = 0.0;
    bool exhaustive = true;
    std::optional<double> standard_error;
};

/// Sums P(alpha) mu11(alpha) over the cells and applies the moment formula.
AlphaVarianceResult combine_alpha_cells(std::vector<AlphaCell> cells, double mu, double mu_squared,
                                        std::size_t realizations);

struct AlphaOptions {
    /// Ordered subset pairs per process above which cells fall back to
    /// Monte Carlo.
    std::size_t point_cap = 4'000'000;
    std::size_t mc_pairs = 200'000;
    std::uint64_t seed = 0;
};

/// Var Theta* estimated from the observed samples: mu11(alpha) is averaged
/// over all ordered subset pairs with the given overlaps, mu is the exact
/// resampling mean, and mu^2 is estimated by mu11(0, 0).
AlphaVarianceResult theta_variance_alpha(const RenewalComparisonSpec& spec, std::size_t realizations,
                                         const AlphaOptions& options = {});

/// Var Theta* for known normal generators and sample sizes n_x, n_y.
AlphaVarianceResult theta_variance_alpha_normal(double mean_x, double sd_x, double mean_y,
                                                double sd_y, std::size_t n_x, std::size_t n_y,
                                                std::size_t m_x, std::size_t m_y,
                                                std::size_t realizations);

/// Exact resampling expectation of Theta* given the samples: the fraction of
/// (demand subset, supply subset) pairs with psi = 1.
double exact_resampling_mean(const RenewalComparisonSpec& spec);

}  // namespace resample::renewal
