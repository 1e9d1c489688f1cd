#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"
#include "resample/oracle/oracle.hpp"
#include "resample/renewal/inventory.hpp"
#include "resample/renewal/renewal.hpp"

using namespace resample;
using namespace resample::renewal;

namespace {

ErrorKind kind_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorKind::usage;
}

Sample draw(const oracle::GeneratorSpec& gen, std::size_t n, std::uint64_t seed)
{
    auto rng = CounterRng::stream(seed, StreamDomain::oracle_samples, 0);
    return gen.sample(n, rng);
}

InventoryEconomics reference_economics(std::size_t m = 5)
{
    return {2.0, 5.0, 0.0, 0.2, 0, 6, m};
}

const NormalTruth reference_truth{2.0, 1.0, 2.5, 0.2};

}  // namespace

TEST(Psi, Examples)
{
    const std::vector<double> a{2, 3}, b{1, 2}, one{1}, none;
    EXPECT_EQ(psi(a, b), 1);
    EXPECT_EQ(psi(b, a), 0);
    EXPECT_EQ(psi(one, one), 0);
    EXPECT_EQ(psi(one, none), 1);
}

TEST(Psi, ScaleInvariance)
{
    auto rng = CounterRng::stream(4, StreamDomain::oracle_samples, 0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x(3), y(2), cx(3), cy(2);
        const double c = 0.1 + 10.0 * rng.uniform();
        for (std::size_t i = 0; i < 3; ++i) {
            x[i] = rng.uniform();
            cx[i] = c * x[i];
        }
        for (std::size_t i = 0; i < 2; ++i) {
            y[i] = rng.uniform();
            cy[i] = c * y[i];
        }
        EXPECT_EQ(psi(x, y), psi(cx, cy));
    }
}

TEST(Spec, PlanChecks)
{
    const Sample s({1, 2, 3, 4});
    EXPECT_EQ(kind_of([&] { RenewalComparisonSpec{s, s, 3, 1}.validate(); }), ErrorKind::invalid_plan);
    EXPECT_EQ(kind_of([&] { RenewalComparisonSpec{s, s, 1, 2}.validate(); }), ErrorKind::invalid_input);
    EXPECT_EQ(kind_of([&] { RenewalComparisonSpec{s, s, 0, 0}.validate(); }), ErrorKind::invalid_input);
    EXPECT_NO_THROW((RenewalComparisonSpec{s, s, 2, 2}.validate()));
}

TEST(ExactTheta, Exponential)
{
    EXPECT_NEAR(theta_exponential(1.0, 1.0, 1, 1), 0.5, 1e-15);
    EXPECT_NEAR(theta_exponential(0.3, 0.7, 1, 1), 0.7, 1e-15);
    EXPECT_EQ(theta_exponential(0.3, 0.7, 3, 0), 1.0);
    const auto mc = oracle::mc_true_theta(oracle::GeneratorSpec(oracle::ExponentialGen{0.3}),
                                          oracle::GeneratorSpec(oracle::ExponentialGen{0.7}), 5, 3, 200000, 2);
    EXPECT_NEAR(theta_exponential(0.3, 0.7, 5, 3), mc.mean, 4.0 * mc.standard_error);
}

TEST(ExactTheta, Normal)
{
    EXPECT_NEAR(theta_normal(2, 1, 2, 1, 5, 5), 0.5, 1e-15);
    EXPECT_NEAR(theta_normal(2, 1, 2.5, 0.2, 1, 1), 1.0 - normal_cdf(0.5 / std::sqrt(1.04)), 1e-12);
    EXPECT_GT(theta_normal(50, 1, 1, 1, 3, 3), 1.0 - 1e-12);
    const auto mc = oracle::mc_true_theta(oracle::GeneratorSpec(oracle::NormalGen{2.0, 1.0}),
                                          oracle::GeneratorSpec(oracle::NormalGen{2.5, 0.2}), 5, 4, 200000, 3);
    EXPECT_NEAR(theta_normal(2, 1, 2.5, 0.2, 5, 4), mc.mean, 4.0 * mc.standard_error);
}

TEST(ExactTheta, NondecreasingInStock)
{
    double prev = 0.0;
    for (std::size_t my = 5; my-- > 0;) {
        const double th = theta_exponential(0.3, 0.7, 5, my);
        EXPECT_GE(th, prev);
        prev = th;
    }
}

TEST(Classical, SymmetricSamplesGiveHalf)
{
    const Sample s({1.0, 2.0, 3.5, 0.5});
    const RenewalComparisonSpec spec{s, s, 2, 2};
    EXPECT_NEAR(classical_theta_normal(spec).estimate, 0.5, 1e-15);
    EXPECT_NEAR(classical_theta_exponential(spec).estimate, 0.5, 1e-15);
}

TEST(Classical, SingleTermClosedForm)
{
    const Sample x({1.0, 2.0, 3.0, 2.0});
    const Sample y({0.5, 1.0, 1.5, 1.0});
    const double lambda = 4.0 / 8.0;
    const double nu = 4.0 / 4.0;
    EXPECT_NEAR(classical_theta_exponential({x, y, 1, 1}).estimate, nu / (lambda + nu), 1e-15);
}

TEST(Classical, DominantDemandNearOne)
{
    const Sample x({100.0, 101.0, 99.0, 100.5});
    const Sample y({1.0, 1.2, 0.8, 1.1});
    EXPECT_GT(classical_theta_normal({x, y, 2, 2}).estimate, 1.0 - 1e-12);
    EXPECT_EQ(classical_theta_normal({x, y, 2, 0}).estimate, 1.0);
}

TEST(Classical, NonPositiveValuesRejectedForExponential)
{
    const Sample x({1.0, -2.0});
    const Sample y({1.0, 2.0});
    EXPECT_EQ(kind_of([&] { classical_theta_exponential({x, y, 1, 1}); }), ErrorKind::invalid_input);
}

TEST(Classical, NormalSymmetricCaseIsUnbiased)
{
    const oracle::GeneratorSpec gen(oracle::NormalGen{2.0, 1.0});
    const std::vector<oracle::RenewalEstimator> est{oracle::RenewalEstimator::classical_normal};
    const auto r = oracle::mc_theta_estimators(gen, gen, 10, 10, 5, 5, 1, est, 20000, 5);
    EXPECT_NEAR(r[0].mean, 0.5, 4.0 * r[0].standard_error);
}

TEST(Resampling, Trivial)
{
    const Sample x({10.0, 11.0, 12.0, 13.0});
    const Sample y({1.0, 1.5, 2.0, 2.5});
    EXPECT_EQ(resampling_theta({x, y, 2, 2}, 100, 1).estimate, 1.0);
    EXPECT_EQ(resampling_theta({y, x, 2, 0}, 100, 1).estimate, 1.0);
    EXPECT_EQ(resampling_theta({y, x, 2, 2}, 100, 1).estimate, 0.0);
}

TEST(Resampling, ExhaustiveMeanAndRepeatedRuns)
{
    const oracle::GeneratorSpec gen(oracle::ExponentialGen{1.0});
    const RenewalComparisonSpec spec{draw(gen, 6, 1), draw(gen, 6, 2), 2, 2};
    const double exact = exact_resampling_mean(spec);
    const auto x = spec.demand.values();
    const auto y = spec.supply.values();
    double count = 0.0;
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = a + 1; b < 6; ++b) {
            for (std::size_t c = 0; c < 6; ++c) {
                for (std::size_t d = c + 1; d < 6; ++d) {
                    count += (x[a] + x[b] > y[c] + y[d]) ? 1.0 : 0.0;
                }
            }
        }
    }
    EXPECT_NEAR(exact, count / 225.0, 1e-15);
    std::vector<double> runs;
    for (std::uint64_t s = 0; s < 400; ++s) {
        runs.push_back(resampling_theta(spec, 50, s).estimate);
    }
    const auto rep = oracle::summarize(runs);
    EXPECT_NEAR(rep.mean, exact, 3.0 * rep.standard_error + 1e-12);
}

TEST(Alpha, SingleRealizationIsIndicatorVariance)
{
    const auto res = theta_variance_alpha_normal(2, 1, 2.5, 0.2, 10, 10, 5, 4, 1);
    EXPECT_NEAR(res.variance, res.mu - res.mu * res.mu, 1e-12);
}

TEST(Alpha, CellProbabilitiesSumToOne)
{
    const auto res = theta_variance_alpha_normal(2, 1, 2, 1, 12, 12, 6, 4, 100);
    double total = 0.0;
    for (const auto& c : res.cells) {
        total += c.probability;
        EXPECT_GE(c.conditional_moment, 0.0);
        EXPECT_LE(c.conditional_moment, 1.0);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Alpha, PopulationVarianceValues)
{
    EXPECT_NEAR(theta_variance_alpha_normal(2, 1, 2, 1, 10, 10, 5, 5, 1000).variance, 0.087, 0.01);
    EXPECT_NEAR(theta_variance_alpha_normal(2, 1, 2, 1, 12, 12, 6, 6, 1000).variance, 0.085, 0.01);
}

TEST(Alpha, ConditionalMomentMatchesSimulation)
{
    const oracle::GeneratorSpec gen(oracle::NormalGen{2.0, 1.0});
    const auto res = theta_variance_alpha_normal(2, 1, 2, 1, 10, 10, 5, 5, 1000);
    for (const auto& c : res.cells) {
        if (c.alpha_x != 2 || c.alpha_y != 3) {
            continue;
        }
        const auto mc = oracle::mc_alpha_moment(gen, gen, 10, 10, 5, 5, 2, 3, 100000, 8);
        EXPECT_NEAR(c.conditional_moment, mc.mean, 4.0 * mc.standard_error);
    }
}

TEST(Alpha, PopulationVarianceMatchesSamplingDistribution)
{
    const oracle::GeneratorSpec gen(oracle::NormalGen{2.0, 1.0});
    const std::vector<oracle::RenewalEstimator> est{oracle::RenewalEstimator::resampling};
    const auto mc = oracle::mc_theta_estimators(gen, gen, 10, 10, 5, 4, 40, est, 6000, 12);
    const double formula = theta_variance_alpha_normal(2, 1, 2, 1, 10, 10, 5, 4, 40).variance;
    EXPECT_NEAR(mc[0].variance, formula, 0.1 * formula);
}

TEST(Alpha, DataRouteIsConsistent)
{
    const oracle::GeneratorSpec gen(oracle::NormalGen{2.0, 1.0});
    const RenewalComparisonSpec spec{draw(gen, 8, 3), draw(gen, 8, 4), 4, 3};
    const auto res = theta_variance_alpha(spec, 100);
    EXPECT_TRUE(res.exhaustive);
    EXPECT_NEAR(res.mu, exact_resampling_mean(spec), 1e-12);
    EXPECT_GE(res.variance, 0.0);
    double total = 0.0;
    for (const auto& c : res.cells) {
        total += c.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Alpha, DataRouteFallsBackToSampling)
{
    const oracle::GeneratorSpec gen(oracle::NormalGen{2.0, 1.0});
    const RenewalComparisonSpec spec{draw(gen, 10, 3), draw(gen, 10, 4), 5, 5};
    const auto exact = theta_variance_alpha(spec, 100);
    const auto sampled = theta_variance_alpha(spec, 100, {1000, 50000, 7});
    EXPECT_FALSE(sampled.exhaustive);
    ASSERT_TRUE(sampled.standard_error.has_value());
    EXPECT_NEAR(sampled.mu11, exact.mu11, 4.0 * *sampled.standard_error + 1e-3);
}

TEST(Shortage, Marginal)
{
    EXPECT_EQ(shortage_probability(2, 3, reference_truth), 0.0);
    EXPECT_EQ(shortage_probability(3, 3, reference_truth), 0.0);
    EXPECT_NEAR(shortage_probability(1, 0, reference_truth), 1.0 - theta_normal(2, 1, 2.5, 0.2, 1, 1), 1e-15);
    EXPECT_NEAR(shortage_probability(1, 0, reference_truth), 0.688, 1e-3);
    const double p = shortage_probability(4, 3, reference_truth);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 0.05);
}

TEST(Shortage, ResamplingNeedsLargeEnoughSample)
{
    const ResamplingSource src{Sample({1, 2, 3, 4}), Sample({1, 2, 3, 4}), 100, 1};
    EXPECT_NO_THROW(shortage_probability(2, 0, src));
    EXPECT_EQ(kind_of([&] { shortage_probability(3, 0, src); }), ErrorKind::insufficient_sample);
}

TEST(Inventory, IncomeExamples)
{
    const auto one = reference_economics(1);
    const std::vector<double> zero1{0.0};
    EXPECT_NEAR(average_income(one, 1, zero1), 1.8, 1e-12);
    const auto three = reference_economics(3);
    const auto profile = shortage_profile(3, 3, reference_truth);
    EXPECT_NEAR(average_income(three, 3, profile), 5.4, 1e-12);

    InventoryEconomics free{2.0, 5.0, 0.0, 0.0, 0, 3, 4};
    const std::vector<double> all(4, 1.0), none(4, 0.0);
    EXPECT_NEAR(average_income(free, 0, all), 4.0 * (2.0 - 5.0), 1e-12);
    EXPECT_EQ(average_damage(free, 0, none), 0.0);
    EXPECT_NEAR(average_damage(reference_economics(4), 4, none), 0.8, 1e-12);
}

TEST(Inventory, IncomePlusDamageIsConstant)
{
    const auto econ = reference_economics();
    for (std::size_t k = 0; k <= 6; ++k) {
        const auto p = shortage_profile(5, k, reference_truth);
        EXPECT_NEAR(average_income(econ, k, p) + average_damage(econ, k, p), 10.0, 1e-12);
    }
}

TEST(Inventory, ReferenceOptimum)
{
    const auto best = optimal_k(reference_economics(), reference_truth);
    EXPECT_EQ(best.k, 3u);
    ASSERT_EQ(best.profile.size(), 7u);
    double min_damage = best.profile[0].damage;
    std::size_t arg = 0;
    for (const auto& pt : best.profile) {
        if (pt.damage < min_damage) {
            min_damage = pt.damage;
            arg = pt.k;
        }
    }
    EXPECT_EQ(arg, best.k);
}

TEST(Inventory, TrivialOptima)
{
    InventoryEconomics holding_only{2.0, 0.0, 0.0, 0.2, 1, 6, 5};
    EXPECT_EQ(optimal_k(holding_only, reference_truth).k, 1u);
    InventoryEconomics penalty_only{2.0, 5.0, 0.0, 0.0, 0, 8, 5};
    const auto best = optimal_k(penalty_only, reference_truth);
    EXPECT_EQ(best.k, 5u);
}

TEST(Inventory, EconomicsValidation)
{
    InventoryEconomics bad{2.0, 5.0, 0.0, 0.2, 4, 2, 5};
    EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::invalid_input);
    InventoryEconomics nan{2.0, NAN, 0.0, 0.2, 0, 2, 5};
    EXPECT_EQ(kind_of([&] { nan.validate(); }), ErrorKind::invalid_input);
}
