#include "resample/failure/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"

namespace resample::failure {

void FailureModelSpec::validate() const
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        fail(ErrorKind::invalid_input, "failure rate must be positive and finite");
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
        fail(ErrorKind::invalid_input, "horizon must be finite and non-negative");
    }
}

Lambdas true_lambdas(const FailureModelSpec& spec)
{
    spec.validate();
    Lambdas out;
    out.initial = spec.rate * spec.degeneration.integrated_survival(spec.horizon);
    out.terminal = spec.rate * spec.degeneration.integrated_cdf(spec.horizon);
    return out;
}

double true_pmf(double lambda, std::size_t i)
{
    if (!(lambda >= 0.0)) {
        fail(ErrorKind::invalid_input, "expected count must be non-negative");
    }
    return poisson_pmf(i, lambda);
}

std::vector<double> poisson_family(double lambda)
{
    const auto count = static_cast<std::size_t>(std::ceil(lambda + 40.0 * std::sqrt(lambda))) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = true_pmf(lambda, i);
    }
    return out;
}

void FailureSamples::validate() const
{
    if (intervals.min() < 0.0 || degenerations.min() < 0.0) {
        fail(ErrorKind::invalid_input, "failure samples must be non-negative");
    }
}

FailureEstimate plugin_estimate(const FailureSamples& samples, double horizon)
{
    samples.validate();
    const double total = samples.intervals.sum();
    if (!(total > 0.0)) {
        fail(ErrorKind::undefined_rate, "all inter-arrival intervals are zero");
    }
    const DegenerationDistribution empirical{Empirical{samples.degenerations}};
    FailureEstimate out;
    out.rate = static_cast<double>(samples.intervals.size()) / total;
    out.initial.method = EstimatorMethod::plug_in;
    out.terminal.method = EstimatorMethod::plug_in;
    out.initial.estimate = out.rate * empirical.integrated_survival(horizon);
    out.terminal.estimate = out.rate * empirical.integrated_cdf(horizon);
    out.initial_pmf = poisson_family(out.initial.estimate);
    out.terminal_pmf = poisson_family(out.terminal.estimate);
    return out;
}

TrajectorySampler::TrajectorySampler(const FailureSamples& samples)
    : intervals_(samples.intervals.values()),
      degenerations_(samples.degenerations.values()),
      interval_drawer_(samples.intervals.size()),
      degeneration_drawer_(samples.degenerations.size())
{
}

Trajectory TrajectorySampler::operator()(double horizon, CounterRng& rng)
{
    interval_drawer_.reset();
    degeneration_drawer_.reset();
    Trajectory out;
    double arrival = 0.0;
    // At most k arrivals: once the interval sample is used up the count is
    // capped at k.
    for (std::size_t j = 0; j < intervals_.size(); ++j) {
        arrival += intervals_[interval_drawer_.next(rng)];
        if (arrival > horizon) {
            break;
        }
        if (degeneration_drawer_.drawn() == degenerations_.size()) {
            fail(ErrorKind::sample_exhausted,
                 "trajectory needs more degeneration times than the sample holds");
        }
        const double degeneration = degenerations_[degeneration_drawer_.next(rng)];
        ++out.arrivals;
        if (horizon < arrival + degeneration) {
            ++out.initial;
        } else {
            ++out.terminal;
        }
    }
    return out;
}

Trajectory resample_trajectory(const FailureSamples& samples, double horizon, CounterRng& rng)
{
    samples.validate();
    TrajectorySampler sampler(samples);
    return sampler(horizon, rng);
}

FailureEstimate resampling_estimate(const FailureSamples& samples, double horizon,
                                    std::size_t realizations, std::uint64_t seed)
{
    if (realizations < 1) {
        fail(ErrorKind::invalid_plan, "at least one realization is required");
    }
    samples.validate();
    const std::size_t k = samples.intervals.size();
    TrajectorySampler sampler(samples);
    std::vector<std::uint64_t> initial_counts(k + 1, 0);
    std::vector<std::uint64_t> terminal_counts(k + 1, 0);
    for (std::size_t q = 0; q < realizations; ++q) {
        auto rng = CounterRng::stream(seed, StreamDomain::failure, q);
        const auto traj = sampler(horizon, rng);
        ++initial_counts[traj.initial];
        ++terminal_counts[traj.terminal];
    }
    // Integer tallies make the estimates independent of realization order.
    FailureEstimate out;
    out.initial.method = EstimatorMethod::resampling;
    out.terminal.method = EstimatorMethod::resampling;
    const double r = static_cast<double>(realizations);
    std::uint64_t initial_total = 0;
    std::uint64_t terminal_total = 0;
    out.initial_pmf.resize(k + 1);
    out.terminal_pmf.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        initial_total += i * initial_counts[i];
        terminal_total += i * terminal_counts[i];
        out.initial_pmf[i] = static_cast<double>(initial_counts[i]) / r;
        out.terminal_pmf[i] = static_cast<double>(terminal_counts[i]) / r;
    }
    out.initial.estimate = static_cast<double>(initial_total) / r;
    out.terminal.estimate = static_cast<double>(terminal_total) / r;
    return out;
}

double survival_fraction(const FailureModelSpec& spec)
{
    spec.validate();
    if (spec.horizon == 0.0) {
        return 1.0;
    }
    return spec.degeneration.integrated_survival(spec.horizon) / spec.horizon;
}

namespace {

double capped_poisson_mean(double mean, std::size_t cap)
{
    // E[min(N, cap)] for N ~ Poisson(mean).
    NeumaierSum acc;
    for (std::size_t j = 1; j <= cap; ++j) {
        acc.add(static_cast<double>(j) * poisson_pmf(j, mean));
    }
    acc.add(static_cast<double>(cap) * poisson_tail_above(cap, mean));
    return acc.value();
}

double thinned_capped_pmf(double mean, double keep, std::size_t cap, std::size_t i)
{
    if (i > cap) {
        fail(ErrorKind::out_of_range,
             "expectation of P*_" + std::to_string(i) + " is unavailable for i > l = "
                 + std::to_string(cap) + "; use the plug-in estimator");
    }
    const double drop = 1.0 - keep;
    auto binom_term = [&](std::size_t j) {
        return binomial(j, i) * std::pow(keep, static_cast<double>(i))
               * std::pow(drop, static_cast<double>(j - i));
    };
    NeumaierSum acc;
    for (std::size_t j = i; j <= cap; ++j) {
        acc.add(poisson_pmf(j, mean) * binom_term(j));
    }
    acc.add(binom_term(cap) * poisson_tail_above(cap, mean));
    return acc.value();
}

}  // namespace

double expected_resampling_initial(const FailureModelSpec& spec, std::size_t k)
{
    const double mean = spec.rate * spec.horizon;
    if (mean == 0.0) {
        return 0.0;
    }
    return survival_fraction(spec) * capped_poisson_mean(mean, k);
}

double expected_resampling_terminal(const FailureModelSpec& spec, std::size_t k)
{
    const double mean = spec.rate * spec.horizon;
    if (mean == 0.0) {
        return 0.0;
    }
    return (1.0 - survival_fraction(spec)) * capped_poisson_mean(mean, k);
}

double expected_resampling_pmf(const FailureModelSpec& spec, std::size_t l, std::size_t i)
{
    const double mean = spec.rate * spec.horizon;
    const double keep = survival_fraction(spec);
    return thinned_capped_pmf(mean, keep, l, i);
}

double expected_resampling_terminal_pmf(const FailureModelSpec& spec, std::size_t l, std::size_t i)
{
    const double mean = spec.rate * spec.horizon;
    const double keep = 1.0 - survival_fraction(spec);
    return thinned_capped_pmf(mean, keep, l, i);
}

ResamplingExpectation resampling_expectation_analytic(const FailureModelSpec& spec, std::size_t k,
                                                      std::size_t l, std::size_t i)
{
    return {expected_resampling_initial(spec, k), expected_resampling_pmf(spec, l, i)};
}

std::vector<double> combine_pmf(std::span<const double> resampling_head,
                                std::span<const double> plugin, std::size_t l)
{
    const std::size_t size = std::max(plugin.size(), std::min(resampling_head.size(), l + 1));
    std::vector<double> out(size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        if (i <= l) {
            out[i] = i < resampling_head.size() ? resampling_head[i] : 0.0;
        } else {
            out[i] = i < plugin.size() ? plugin[i] : 0.0;
        }
    }
    const double total = compensated_sum(out);
    if (!(total > 0.0)) {
        fail(ErrorKind::invalid_input, "combined family has no mass");
    }
    for (auto& p : out) {
        p /= total;
    }
    return out;
}

std::vector<double> combined_estimate(const FailureSamples& samples, double horizon,
                                      std::size_t realizations, std::uint64_t seed)
{
    const auto plug = plugin_estimate(samples, horizon);
    const auto res = resampling_estimate(samples, horizon, realizations, seed);
    return combine_pmf(res.initial_pmf, plug.initial_pmf, samples.degenerations.size());
}

}  // namespace resample::failure
