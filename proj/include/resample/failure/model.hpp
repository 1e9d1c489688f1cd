#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "resample/core/report.hpp"
#include "resample/core/resample.hpp"
#include "resample/core/rng.hpp"
#include "resample/core/sample.hpp"
#include "resample/failure/distribution.hpp"

namespace resample::failure {

/// Initial failures arrive as a homogeneous Poisson process with `rate`;
/// each degenerates into a terminal failure after an independent time drawn
/// from `degeneration`. Characteristics are evaluated at `horizon`.
struct FailureModelSpec {
    double rate = 1.0;
    DegenerationDistribution degeneration;
    double horizon = 0.0;

    void validate() const;
};

/// Expected counts at the horizon: initial failures still present, and
/// terminal failures that have occurred. initial + terminal = rate * horizon.
struct Lambdas {
    double initial = 0.0;
    double terminal = 0.0;
};

Lambdas true_lambdas(const FailureModelSpec& spec);

/// Poisson probability of exactly i failures given expected count lambda.
double true_pmf(double lambda, std::size_t i);

/// Poisson pmf for i = 0..n-1 where n covers lambda + 40 sqrt(lambda), which
/// leaves less than 1e-12 of mass outside.
std::vector<double> poisson_family(double lambda);

/// Observed data: intervals between initial failures (A_1..A_k) and
/// degeneration times (B_1..B_l), all non-negative.
struct FailureSamples {
    Sample intervals;
    Sample degenerations;

    void validate() const;
};

/// Estimates of the model characteristics at one horizon. `initial_pmf[i]`
/// estimates P{X(t) = i}, `terminal_pmf[i]` estimates P{Y(t) = i}.
struct FailureEstimate {
    EstimatorReport initial;
    EstimatorReport terminal;
    std::vector<double> initial_pmf;
    std::vector<double> terminal_pmf;
    /// Plug-in only: the estimated arrival rate.
    double rate = 0.0;
};

/// Plug-in estimators: rate = 1 / mean(A), F replaced by the empirical
/// distribution of B, then the analytic model formulas.
FailureEstimate plugin_estimate(const FailureSamples& samples, double horizon);

struct Trajectory {
    std::size_t arrivals = 0;
    std::size_t initial = 0;
    std::size_t terminal = 0;
};

/// Replays one realization by extracting A and B values without replacement
/// from the samples. Reuses scratch buffers across calls; each call depends
/// only on the stream it is given.
class TrajectorySampler {
public:
    explicit TrajectorySampler(const FailureSamples& samples);

    Trajectory operator()(double horizon, CounterRng& rng);

private:
    std::span<const double> intervals_;
    std::span<const double> degenerations_;
    SubsampleDrawer interval_drawer_;
    SubsampleDrawer degeneration_drawer_;
};

Trajectory resample_trajectory(const FailureSamples& samples, double horizon, CounterRng& rng);

/// Resampling estimators from `realizations` replayed trajectories. Realization
/// q draws from stream (seed, q). The pmf vectors have k + 1 entries.
FailureEstimate resampling_estimate(const FailureSamples& samples, double horizon,
                                    std::size_t realizations, std::uint64_t seed);

/// Expectations of the resampling estimators under the true model with
/// k intervals and l degeneration times. q1 = Lambda(t) / (rate t) is the
/// probability that an arrival uniform on [0, t] has not degenerated by t.
double survival_fraction(const FailureModelSpec& spec);
double expected_resampling_initial(const FailureModelSpec& spec, std::size_t k);
double expected_resampling_terminal(const FailureModelSpec& spec, std::size_t k);
/// E P*_i(t); defined for i <= l only (out-of-range otherwise).
double expected_resampling_pmf(const FailureModelSpec& spec, std::size_t l, std::size_t i);
double expected_resampling_terminal_pmf(const FailureModelSpec& spec, std::size_t l, std::size_t i);

struct ResamplingExpectation {
    double initial = 0.0;
    double pmf = 0.0;
};

ResamplingExpectation resampling_expectation_analytic(const FailureModelSpec& spec, std::size_t k,
                                                      std::size_t l, std::size_t i);

/// Uses resampling_head for i <= l and plugin for i > l, then rescales the
/// family to sum to one.
std::vector<double> combine_pmf(std::span<const double> resampling_head,
                                std::span<const double> plugin, std::size_t l);

std::vector<double> combined_estimate(const FailureSamples& samples, double horizon,
                                      std::size_t realizations, std::uint64_t seed);

}  // namespace resample::failure
