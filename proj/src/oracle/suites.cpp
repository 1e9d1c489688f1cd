#include <cmath>
#include <string>

#include "resample/core/error.hpp"
#include "resample/failure/model.hpp"
#include "resample/oracle/oracle.hpp"
#include "resample/regression/disturbed.hpp"
#include "resample/regression/regression.hpp"
#include "resample/renewal/renewal.hpp"

namespace resample::oracle {

Eigen::MatrixXd synthetic_design(std::size_t n, std::size_t m, std::uint64_t seed)
{
    auto rng = CounterRng::stream(seed, StreamDomain::oracle_samples, 0);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        X(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < X.cols(); ++j) {
            X(i, j) = 10.0 * rng.uniform();
        }
    }
    return X;
}

namespace {

CheckResult check(std::string name, double observed, double expected, double tolerance)
{
    const bool passed = std::abs(observed - expected) <= tolerance;
    return {std::move(name), observed, expected, tolerance, passed};
}

std::string tag(std::size_t n, std::size_t m)
{
    return std::to_string(n) + "x" + std::to_string(m);
}

void regression_instance(std::vector<CheckResult>& out, std::size_t n, std::size_t m, std::size_t k,
                         std::size_t false_row, std::size_t trials, std::uint64_t seed)
{
    const auto X = synthetic_design(n, m, 11 + n);
    regression::DisturbanceSpec spec;
    spec.false_row = false_row;
    spec.beta_true = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(m), 1.0, static_cast<double>(m));
    spec.beta_false = spec.beta_true;
    spec.beta_false(0) += 4.0;
    spec.beta_false(static_cast<Eigen::Index>(m - 1)) -= 0.5;
    spec.noise_variance = 0.25;
    const double shift = spec.shift(X);
    const auto eq_classical = regression::classical_bias(X, false_row, shift);
    const auto eq_resampling = regression::resampling_bias(X, false_row, shift, k).value;
    const auto mc = mc_disturbed_bias(X, spec, k, trials, seed);
    for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out.push_back(check("classical bias " + tag(n, m) + " beta" + std::to_string(j), mc.classical[j].mean,
                            eq_classical(jj), 3.0 * mc.classical[j].standard_error + 1e-12));
        out.push_back(check("resampling bias " + tag(n, m) + " k=" + std::to_string(k) + " beta" + std::to_string(j),
                            mc.resampling[j].mean, eq_resampling(jj),
                            3.0 * mc.resampling[j].standard_error + 1e-12));
    }
    const auto zero = regression::resampling_bias(X, false_row, 0.0, k).value;
    out.push_back(check("zero shift gives zero bias " + tag(n, m), zero.cwiseAbs().maxCoeff(), 0.0, 0.0));

    const auto md = regression::mahalanobis_distances(X.rightCols(X.cols() - 1));
    out.push_back(check("mahalanobis sum identity " + tag(n, m), md.sum(),
                        static_cast<double>((m - 1) * (n - 1)), 1e-9));

    const Eigen::VectorXd y = spec.expected_response(X);
    const regression::RegressionDataset data(X, y);
    const ResamplePlan all{n, 1, false, seed};
    const auto full = regression::resampling_fit(data, all, {regression::ResampleMode::enumerate});
    out.push_back(check("k=n reduces to least squares " + tag(n, m),
                        (full.mean - regression::lse_fit(data)).cwiseAbs().maxCoeff(), 0.0, 1e-9));

    const ResamplePlan plan{m + 1, 1, false, seed};
    const auto fit = regression::resampling_fit(data, plan, {regression::ResampleMode::enumerate});
    const auto independent = exhaustive_subset_lse(X, y, m + 1);
    out.push_back(check("enumerated mean vs independent enumeration " + tag(n, m) + " k=" + std::to_string(m + 1),
                        (fit.mean - independent.mean).cwiseAbs().maxCoeff(), 0.0, 1e-9));
}

std::vector<CheckResult> regression_suite(std::size_t trials, std::uint64_t seed)
{
    std::vector<CheckResult> out;
    regression_instance(out, 6, 2, 4, 1, trials, seed);
    regression_instance(out, 9, 3, 6, 2, trials, seed + 1);
    return out;
}

std::vector<CheckResult> failure_suite(std::size_t trials, std::uint64_t seed)
{
    std::vector<CheckResult> out;
    const failure::FailureModelSpec spec{0.5, failure::DegenerationDistribution{failure::Triangular{0.0, 2.0, 4.0}},
                                         5.0};
    const GeneratorSpec degeneration{TriangularGen{0.0, 2.0, 4.0}};
    const auto lambdas = failure::true_lambdas(spec);
    out.push_back(check("initial + terminal = rate * t", lambdas.initial + lambdas.terminal,
                        spec.rate * spec.horizon, 1e-12));

    const auto simulated = mc_true_pmf(spec, degeneration, 6, trials, seed);
    const double nt = static_cast<double>(trials);
    for (std::size_t i = 0; i < 4; ++i) {
        const double p = failure::true_pmf(lambdas.initial, i);
        out.push_back(check("P_" + std::to_string(i) + "(t) vs simulated process", simulated[i], p,
                            3.0 * std::sqrt(p * (1.0 - p) / nt)));
    }

    const std::size_t k = 8;
    const auto mc = mc_failure_estimators(spec, degeneration, k, k, 20, 4, trials, seed + 1);
    out.push_back(check("E initial* at k=l=8 vs simulated", mc.resampling_initial.mean,
                        failure::expected_resampling_initial(spec, k),
                        3.0 * mc.resampling_initial.standard_error));
    for (std::size_t i = 0; i < 4; ++i) {
        out.push_back(check("E P*_" + std::to_string(i) + " at l=8 vs simulated", mc.resampling_pmf[i].mean,
                            failure::expected_resampling_pmf(spec, k, i),
                            3.0 * mc.resampling_pmf[i].standard_error));
    }
    return out;
}

std::vector<CheckResult> renewal_suite(std::size_t trials, std::uint64_t seed)
{
    std::vector<CheckResult> out;
    const GeneratorSpec demand{NormalGen{2.0, 1.0}};
    const GeneratorSpec supply{NormalGen{2.5, 0.2}};
    const auto normal = mc_true_theta(demand, supply, 5, 5, trials, seed);
    out.push_back(check("normal theta formula vs simulation", normal.mean,
                        renewal::theta_normal(2.0, 1.0, 2.5, 0.2, 5, 5), 3.0 * normal.standard_error));

    const GeneratorSpec exp_demand{ExponentialGen{0.3}};
    const GeneratorSpec exp_supply{ExponentialGen{0.7}};
    const auto expo = mc_true_theta(exp_demand, exp_supply, 5, 3, trials, seed + 1);
    out.push_back(check("exponential theta formula vs simulation", expo.mean,
                        renewal::theta_exponential(0.3, 0.7, 5, 3), 3.0 * expo.standard_error));

    const auto sym = mc_true_theta(demand, demand, 4, 4, trials, seed + 2);
    out.push_back(check("identical generators give one half", sym.mean, 0.5, 3.0 * sym.standard_error));

    const Sample hx({3.1, 0.4, 2.2, 5.0, 1.7, 2.9}, "x");
    const Sample hy({1.2, 2.8, 0.9, 4.1, 2.5, 1.6}, "y");
    const renewal::RenewalComparisonSpec small{hx, hy, 2, 2};
    const double enumerated = exhaustive_resample_expectation(
        hx.values(), 2, hy.values(), 2,
        [](std::span<const double> x, std::span<const double> y) { return double(renewal::psi(x, y)); });
    out.push_back(check("exhaustive theta* expectation n=6 m=2", renewal::exact_resampling_mean(small), enumerated, 0.0));

    const std::size_t n = 10;
    const std::size_t m = 5;
    const std::size_t r = 100;
    const auto population = renewal::theta_variance_alpha_normal(2.0, 1.0, 2.0, 1.0, n, n, m, m - 1, r);
    const GeneratorSpec standard{NormalGen{2.0, 1.0}};
    const RenewalEstimator which[] = {RenewalEstimator::resampling};
    const auto runs = mc_theta_estimators(standard, standard, n, n, m, m - 1, r, which, trials, seed + 3).front();
    out.push_back(check("alpha-pair variance vs repeated runs", runs.variance, population.variance,
                        3.0 * runs.variance * std::sqrt(2.0 / static_cast<double>(trials - 1))));

    const std::size_t data_trials = std::min<std::size_t>(trials, 400);
    const auto data_route = mc_estimator_distribution(
                                data_trials, seed + 4, 1,
                                [&](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> slot) {
                                    const renewal::RenewalComparisonSpec s{standard.sample(n, rng),
                                                                           standard.sample(n, rng), m, m - 1};
                                    slot[0] = renewal::theta_variance_alpha(s, r).raw_variance;
                                })
                                .front();
    out.push_back(check("data-route variance is unbiased for the population value", data_route.mean,
                        population.variance, 3.0 * data_route.standard_error));
    return out;
}

}  // namespace

std::vector<CheckResult> validate_suite(Suite suite, std::size_t trials, std::uint64_t seed)
{
    if (trials < 2) {
        fail(ErrorKind::invalid_input, "validation needs at least two trials");
    }
    switch (suite) {
    case Suite::regression:
        return regression_suite(trials, seed);
    case Suite::failure:
        return failure_suite(trials, seed);
    case Suite::renewal:
        return renewal_suite(trials, seed);
    }
    fail(ErrorKind::usage, "unknown suite");
}

}  // namespace resample::oracle
