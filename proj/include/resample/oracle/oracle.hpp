#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "resample/core/rng.hpp"
#include "resample/core/sample.hpp"
#include "resample/failure/model.hpp"
#include "resample/regression/disturbed.hpp"

namespace resample::oracle {

struct ExponentialGen {
    double rate = 1.0;
};
struct NormalGen {
    double mean = 0.0;
    double sd = 1.0;
};
struct TriangularGen {
    double min = 0.0;
    double mode = 0.5;
    double max = 1.0;
};
struct EmpiricalGen {
    Sample sample;
};

/// A known distribution samples are drawn from. Every kind uses a fixed
/// number of generator draws per value (inverse CDF or Box-Muller).
class GeneratorSpec {
public:
    using Kind = std::variant<ExponentialGen, NormalGen, TriangularGen, EmpiricalGen>;

    explicit GeneratorSpec(Kind kind);

    const Kind& kind() const noexcept { return kind_; }
    double draw(CounterRng& rng) const;
    Sample sample(std::size_t n, CounterRng& rng, std::string label = {}) const;
    double mean() const;
    std::string describe() const;

private:
    Kind kind_;
};

struct TrialReport {
    std::size_t trials = 0;
    std::size_t failed = 0;
    double mean = 0.0;
    double variance = 0.0;
    double standard_error = 0.0;

    double bias(double truth) const { return truth - mean; }
    double mse(double truth) const { return variance + bias(truth) * bias(truth); }
};

/// Summary of a list of values (variance with divisor n - 1).
TrialReport summarize(std::span<const double> values);

/// One trial: trial index, the trial's sample stream, a seed reserved for
/// the estimator under test, and the output slots to fill.
using TrialFn = std::function<void(std::size_t trial, CounterRng& samples,
                                   std::uint64_t estimator_seed, std::span<double> out)>;

/// Runs `trials` independent trials in parallel and summarizes each output
/// component. A trial that throws a library error is counted as failed; more
/// than 1% failures aborts. Results do not depend on the thread count.
std::vector<TrialReport> mc_estimator_distribution(std::size_t trials, std::uint64_t seed,
                                                   std::size_t outputs, const TrialFn& trial);

/// Theta = P{D_mx > S_my} by direct simulation of the two sums.
TrialReport mc_true_theta(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t m_x,
                          std::size_t m_y, std::size_t trials, std::uint64_t seed);

/// Probability that some demand j in K+1..i finds no stock, i.e. the
/// path-cumulative reading of the shortage probability.
TrialReport mc_path_shortage(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t i,
                             std::size_t k, std::size_t trials, std::uint64_t seed);

enum class RenewalEstimator { classical_normal, classical_exponential, resampling };

/// Sampling distribution of Theta estimators over fresh samples of sizes
/// n_x, n_y; one report per requested estimator, in order.
std::vector<TrialReport> mc_theta_estimators(const GeneratorSpec& demand, const GeneratorSpec& supply,
                                             std::size_t n_x, std::size_t n_y, std::size_t m_x,
                                             std::size_t m_y, std::size_t realizations,
                                             std::span<const RenewalEstimator> estimators,
                                             std::size_t trials, std::uint64_t seed);

/// mu11(alpha) over fresh samples: two subset pairs sharing alpha_x demand
/// and alpha_y supply elements.
TrialReport mc_alpha_moment(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t n_x,
                            std::size_t n_y, std::size_t m_x, std::size_t m_y, std::size_t alpha_x,
                            std::size_t alpha_y, std::size_t trials, std::uint64_t seed);

/// Failure-model estimators over fresh samples: k exponential intervals at
/// spec.rate and l degeneration times from `degeneration`.
struct FailureTrialSummary {
    TrialReport plugin_initial;
    TrialReport resampling_initial;
    std::vector<TrialReport> plugin_pmf;
    std::vector<TrialReport> resampling_pmf;
};

FailureTrialSummary mc_failure_estimators(const failure::FailureModelSpec& spec,
                                          const GeneratorSpec& degeneration, std::size_t k,
                                          std::size_t l, std::size_t realizations,
                                          std::size_t pmf_terms, std::size_t trials,
                                          std::uint64_t seed);

/// Counts of initial failures at the horizon by direct simulation of the
/// Poisson arrivals and degeneration delays.
std::vector<double> mc_true_pmf(const failure::FailureModelSpec& spec, const GeneratorSpec& degeneration,
                                std::size_t terms, std::size_t trials, std::uint64_t seed);

/// Exact expectation over every `size`-subset of `values`, enumerated by
/// bitmask. Refuses when C(n, size) exceeds `cap`.
double exhaustive_resample_expectation(std::span<const double> values, std::size_t size,
                                       const std::function<double(std::span<const double>)>& functional,
                                       std::size_t cap = 200'000);

/// Same over every pair (subset of x, subset of y).
double exhaustive_resample_expectation(
    std::span<const double> x, std::size_t size_x, std::span<const double> y, std::size_t size_y,
    const std::function<double(std::span<const double>, std::span<const double>)>& functional,
    std::size_t cap = 200'000);

/// Normal-equations solve by Gaussian elimination with partial pivoting;
/// false when the system is numerically singular.
bool solve_normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, Eigen::VectorXd& beta);

struct SubsetAverage {
    Eigen::VectorXd mean;
    std::size_t used = 0;
    std::size_t singular = 0;
};

/// Average of the subset least-squares fits over every k-subset of rows.
SubsetAverage exhaustive_subset_lse(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, std::size_t k,
                                    std::size_t cap = 200'000);

/// Bias (beta - estimate) of the classical and exhaustive resampling
/// estimators over fresh noise, per component.
struct DisturbedTrialSummary {
    std::vector<TrialReport> classical;
    std::vector<TrialReport> resampling;
};

DisturbedTrialSummary mc_disturbed_bias(const Eigen::MatrixXd& X, const regression::DisturbanceSpec& spec,
                                        std::size_t k, std::size_t trials, std::uint64_t seed);

/// Deterministic synthetic design: an intercept column followed by m - 1
/// columns of uniform(0, 10) values drawn from `seed`.
Eigen::MatrixXd synthetic_design(std::size_t n, std::size_t m, std::uint64_t seed);

struct CheckResult {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

enum class Suite { regression, failure, renewal };

Suite parse_suite(const std::string& name);

std::vector<CheckResult> validate_suite(Suite suite, std::size_t trials, std::uint64_t seed);

}  // namespace resample::oracle
