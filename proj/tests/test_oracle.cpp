#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/oracle/oracle.hpp"
#include "resample/regression/regression.hpp"

using namespace resample;
using namespace resample::oracle;

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

double sample_mean(const GeneratorSpec& gen, std::size_t n, std::uint64_t seed)
{
    auto rng = CounterRng::stream(seed, StreamDomain::oracle_samples, 0);
    return gen.sample(n, rng).mean();
}

}  // namespace

TEST(Generator, MeansMatchParameters)
{
    const GeneratorSpec exp(ExponentialGen{0.5});
    const GeneratorSpec norm(NormalGen{2.0, 1.0});
    const GeneratorSpec tri(TriangularGen{0.0, 1.0, 4.0});
    EXPECT_NEAR(exp.mean(), 2.0, 1e-15);
    EXPECT_NEAR(tri.mean(), 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(sample_mean(exp, 200000, 1), 2.0, 0.02);
    EXPECT_NEAR(sample_mean(norm, 200000, 2), 2.0, 0.01);
    EXPECT_NEAR(sample_mean(tri, 200000, 3), 5.0 / 3.0, 0.01);
}

TEST(Generator, EmpiricalDrawsFromSample)
{
    const GeneratorSpec emp(EmpiricalGen{Sample({1.0, 5.0, 9.0})});
    auto rng = CounterRng::stream(5, StreamDomain::oracle_samples, 0);
    for (int i = 0; i < 100; ++i) {
        const double v = emp.draw(rng);
        EXPECT_TRUE(v == 1.0 || v == 5.0 || v == 9.0);
    }
    EXPECT_NEAR(emp.mean(), 5.0, 1e-15);
}

TEST(Generator, InvalidParameters)
{
    EXPECT_EQ(kind_of([] { GeneratorSpec g(NormalGen{0.0, 0.0}); }), ErrorKind::invalid_input);
    EXPECT_EQ(kind_of([] { GeneratorSpec g(ExponentialGen{-1.0}); }), ErrorKind::invalid_input);
    EXPECT_EQ(kind_of([] { GeneratorSpec g(TriangularGen{0.0, 3.0, 2.0}); }), ErrorKind::invalid_input);
}

TEST(Summary, MomentsAndErrors)
{
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const auto r = summarize(v);
    EXPECT_EQ(r.trials, 4u);
    EXPECT_NEAR(r.mean, 2.5, 1e-15);
    EXPECT_NEAR(r.variance, 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.standard_error, std::sqrt(5.0 / 12.0), 1e-15);
    EXPECT_NEAR(r.bias(3.0), 0.5, 1e-15);
    EXPECT_NEAR(r.mse(3.0), 5.0 / 3.0 + 0.25, 1e-15);
}

TEST(Distribution, IndependentOfThreadCount)
{
    const TrialFn trial = [](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> out) {
        out[0] = rng.uniform();
        out[1] = rng.standard_normal();
    };
    ::setenv("RESAMPLE_THREADS", "1", 1);
    const auto one = mc_estimator_distribution(5000, 9, 2, trial);
    ::setenv("RESAMPLE_THREADS", "4", 1);
    const auto four = mc_estimator_distribution(5000, 9, 2, trial);
    ::unsetenv("RESAMPLE_THREADS");
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_EQ(one[j].mean, four[j].mean);
        EXPECT_EQ(one[j].variance, four[j].variance);
    }
    EXPECT_NEAR(one[0].mean, 0.5, 4.0 * one[0].standard_error);
}

TEST(Distribution, FailedTrials)
{
    const auto few = mc_estimator_distribution(1000, 1, 1, [](std::size_t t, CounterRng&, std::uint64_t,
                                                              std::span<double> out) {
        if (t % 250 == 0) {
            throw Error(ErrorKind::degenerate_dataset, "bad trial");
        }
        out[0] = 1.0;
    });
    EXPECT_EQ(few[0].failed, 4u);
    EXPECT_EQ(few[0].trials, 996u);
    EXPECT_EQ(few[0].mean, 1.0);

    EXPECT_EQ(kind_of([] {
                  mc_estimator_distribution(1000, 1, 1, [](std::size_t t, CounterRng&, std::uint64_t,
                                                           std::span<double> out) {
                      if (t % 50 == 0) {
                          throw Error(ErrorKind::degenerate_dataset, "bad trial");
                      }
                      out[0] = 1.0;
                  });
              }),
              ErrorKind::trial_failures);
}

TEST(Exhaustive, SubsetMeanIsSampleMean)
{
    const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 7.0;
    for (std::size_t k = 1; k <= 7; ++k) {
        const double e = exhaustive_resample_expectation(v, k, [](std::span<const double> s) {
            return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
        });
        EXPECT_NEAR(e, mean, 1e-12) << k;
    }
}

TEST(Exhaustive, SubsetVarianceIsUnbiasedSampleVariance)
{
    // The average of the subset variances equals the full-sample variance.
    const std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0, 9.0};
    const double full = Sample(v).variance();
    const double e = exhaustive_resample_expectation(v, 3, [](std::span<const double> s) {
        return Sample(std::vector<double>(s.begin(), s.end())).variance();
    });
    EXPECT_NEAR(e, full, 1e-12);
}

TEST(Exhaustive, PairCountsAndCap)
{
    const std::vector<double> x{1, 2, 3, 4, 5, 6};
    const double all = exhaustive_resample_expectation(
        x, 2, x, 2, [](std::span<const double>, std::span<const double>) { return 1.0; });
    EXPECT_EQ(all, 1.0);
    std::vector<double> big(30, 1.0);
    EXPECT_EQ(kind_of([&] {
                  exhaustive_resample_expectation(big, 15, [](std::span<const double>) { return 0.0; });
              }),
              ErrorKind::enumeration_cap_exceeded);
}

TEST(Solver, AgreesWithQrAndDetectsSingular)
{
    const auto X = synthetic_design(12, 4, 2);
    Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(12, -1.0, 3.0);
    Eigen::VectorXd beta;
    ASSERT_TRUE(solve_normal_equations(X, y, beta));
    EXPECT_LT((beta - regression::lse_fit(X, y)).cwiseAbs().maxCoeff(), 1e-9);
    Eigen::MatrixXd sing(3, 2);
    sing << 1, 2, 2, 4, 3, 6;
    EXPECT_FALSE(solve_normal_equations(sing, Eigen::VectorXd::Ones(3), beta));
}

TEST(Solver, SubsetAverageCounts)
{
    const auto X = synthetic_design(6, 2, 3);
    const auto avg = exhaustive_subset_lse(X, Eigen::VectorXd::Ones(6), 3);
    EXPECT_EQ(avg.used + avg.singular, binomial_exact(6, 3));
    EXPECT_NEAR(avg.mean(0), 1.0, 1e-9);
    EXPECT_NEAR(avg.mean(1), 0.0, 1e-9);
}

TEST(Design, InterceptAndDeterminism)
{
    const auto a = synthetic_design(5, 3, 7);
    const auto b = synthetic_design(5, 3, 7);
    EXPECT_EQ(a, b);
    EXPECT_TRUE((a.col(0).array() == 1.0).all());
    EXPECT_TRUE((a.rightCols(2).array() >= 0.0).all());
    EXPECT_TRUE((a.rightCols(2).array() <= 10.0).all());
}

TEST(Suites, ParseNames)
{
    EXPECT_EQ(parse_suite("regression"), Suite::regression);
    EXPECT_EQ(parse_suite("failure"), Suite::failure);
    EXPECT_EQ(parse_suite("renewal"), Suite::renewal);
    EXPECT_EQ(kind_of([] { parse_suite("nope"); }), ErrorKind::usage);
}

class SuiteRun : public ::testing::TestWithParam<Suite> {};

TEST_P(SuiteRun, AllChecksPass)
{
    const auto checks = validate_suite(GetParam(), 1000, 11);
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) {
        EXPECT_TRUE(c.passed) << c.name << ": observed " << c.observed << " expected " << c.expected
                              << " tolerance " << c.tolerance;
    }
}

INSTANTIATE_TEST_SUITE_P(Oracle, SuiteRun, ::testing::Values(Suite::regression, Suite::failure, Suite::renewal));
