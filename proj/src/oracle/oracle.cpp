#include "resample/oracle/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"
#include "resample/core/parallel.hpp"
#include "resample/core/resample.hpp"
#include "resample/renewal/renewal.hpp"

namespace resample::oracle {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

GeneratorSpec::GeneratorSpec(Kind kind) : kind_(std::move(kind))
{
    std::visit(overloaded{
                   [](const ExponentialGen& g) {
                       if (!(g.rate > 0.0) || !std::isfinite(g.rate)) {
                           fail(ErrorKind::invalid_input, "exponential rate must be positive");
                       }
                   },
                   [](const NormalGen& g) {
                       if (!(g.sd > 0.0) || !std::isfinite(g.sd) || !std::isfinite(g.mean)) {
                           fail(ErrorKind::invalid_input, "normal sd must be positive");
                       }
                   },
                   [](const TriangularGen& g) {
                       if (!(g.min <= g.mode && g.mode <= g.max && g.min < g.max)) {
                           fail(ErrorKind::invalid_input, "triangular needs min <= mode <= max, min < max");
                       }
                   },
                   [](const EmpiricalGen&) {},
               },
               kind_);
}

double GeneratorSpec::draw(CounterRng& rng) const
{
    return std::visit(overloaded{
                          [&](const ExponentialGen& g) { return -std::log(rng.uniform_open()) / g.rate; },
                          [&](const NormalGen& g) { return g.mean + g.sd * rng.standard_normal(); },
                          [&](const TriangularGen& g) {
                              const double u = rng.uniform();
                              const double width = g.max - g.min;
                              const double split = (g.mode - g.min) / width;
                              if (u < split) {
                                  return g.min + std::sqrt(u * width * (g.mode - g.min));
                              }
                              return g.max - std::sqrt((1.0 - u) * width * (g.max - g.mode));
                          },
                          [&](const EmpiricalGen& g) { return g.sample[rng.below(g.sample.size())]; },
                      },
                      kind_);
}

Sample GeneratorSpec::sample(std::size_t n, CounterRng& rng, std::string label) const
{
    std::vector<double> values(n);
    for (auto& v : values) {
        v = draw(rng);
    }
    return Sample(std::move(values), std::move(label));
}

double GeneratorSpec::mean() const
{
    return std::visit(overloaded{
                          [](const ExponentialGen& g) { return 1.0 / g.rate; },
                          [](const NormalGen& g) { return g.mean; },
                          [](const TriangularGen& g) { return (g.min + g.mode + g.max) / 3.0; },
                          [](const EmpiricalGen& g) { return g.sample.mean(); },
                      },
                      kind_);
}

std::string GeneratorSpec::describe() const
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    std::visit(overloaded{
                   [&](const ExponentialGen& g) { out << "exponential:" << g.rate; },
                   [&](const NormalGen& g) { out << "normal:" << g.mean << ',' << g.sd; },
                   [&](const TriangularGen& g) { out << "triangular:" << g.min << ',' << g.mode << ',' << g.max; },
                   [&](const EmpiricalGen& g) { out << "empirical:" << g.sample.label(); },
               },
               kind_);
    return out.str();
}

TrialReport summarize(std::span<const double> values)
{
    TrialReport out;
    out.trials = values.size();
    if (values.empty()) {
        return out;
    }
    out.mean = compensated_sum(values) / static_cast<double>(values.size());
    if (values.size() > 1) {
        NeumaierSum acc;
        for (double v : values) {
            acc.add((v - out.mean) * (v - out.mean));
        }
        out.variance = acc.value() / static_cast<double>(values.size() - 1);
    }
    out.standard_error = std::sqrt(out.variance / static_cast<double>(values.size()));
    return out;
}

std::vector<TrialReport> mc_estimator_distribution(std::size_t trials, std::uint64_t seed,
                                                   std::size_t outputs, const TrialFn& trial)
{
    if (trials < 1) {
        fail(ErrorKind::invalid_input, "at least one trial is required");
    }
    std::vector<double> values(trials * outputs, 0.0);
    std::vector<char> ok(trials, 1);
    parallel_for(trials, [&](std::size_t t) {
        auto rng = CounterRng::stream(seed, StreamDomain::oracle_samples, t);
        const auto estimator_seed = CounterRng::stream(seed, StreamDomain::oracle_estimator_seed, t)();
        try {
            trial(t, rng, estimator_seed, std::span<double>(values.data() + t * outputs, outputs));
        } catch (const Error&) {
            ok[t] = 0;
        }
    });
    const auto failed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
    if (failed * 100 > trials) {
        fail(ErrorKind::trial_failures,
             std::to_string(failed) + " of " + std::to_string(trials) + " trials failed");
    }
    std::vector<TrialReport> out;
    std::vector<double> column;
    column.reserve(trials - failed);
    for (std::size_t j = 0; j < outputs; ++j) {
        column.clear();
        for (std::size_t t = 0; t < trials; ++t) {
            if (ok[t]) {
                column.push_back(values[t * outputs + j]);
            }
        }
        auto report = summarize(column);
        report.failed = failed;
        out.push_back(report);
    }
    return out;
}

TrialReport mc_true_theta(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t m_x,
                          std::size_t m_y, std::size_t trials, std::uint64_t seed)
{
    return mc_estimator_distribution(trials, seed, 1,
                                     [&](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> out) {
                                         double d = 0.0;
                                         for (std::size_t i = 0; i < m_x; ++i) {
                                             d += demand.draw(rng);
                                         }
                                         double s = 0.0;
                                         for (std::size_t i = 0; i < m_y; ++i) {
                                             s += supply.draw(rng);
                                         }
                                         out[0] = d > s ? 1.0 : 0.0;
                                     })
        .front();
}

TrialReport mc_path_shortage(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t i,
                             std::size_t k, std::size_t trials, std::uint64_t seed)
{
    if (i < 1) {
        fail(ErrorKind::invalid_input, "demand index is 1-based");
    }
    return mc_estimator_distribution(
               trials, seed, 1,
               [&](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> out) {
                   std::vector<double> d(i + 1, 0.0);
                   for (std::size_t j = 1; j <= i; ++j) {
                       d[j] = d[j - 1] + demand.draw(rng);
                   }
                   const std::size_t supplies = i > k ? i - k : 0;
                   std::vector<double> s(supplies + 1, 0.0);
                   for (std::size_t j = 1; j <= supplies; ++j) {
                       s[j] = s[j - 1] + supply.draw(rng);
                   }
                   bool shortage = false;
                   for (std::size_t j = k + 1; j <= i; ++j) {
                       shortage = shortage || !(d[j] > s[j - k]);
                   }
                   out[0] = shortage ? 1.0 : 0.0;
               })
        .front();
}

std::vector<TrialReport> mc_theta_estimators(const GeneratorSpec& demand, const GeneratorSpec& supply,
                                             std::size_t n_x, std::size_t n_y, std::size_t m_x,
                                             std::size_t m_y, std::size_t realizations,
                                             std::span<const RenewalEstimator> estimators,
                                             std::size_t trials, std::uint64_t seed)
{
    const std::vector<RenewalEstimator> which(estimators.begin(), estimators.end());
    return mc_estimator_distribution(
        trials, seed, which.size(),
        [&](std::size_t, CounterRng& rng, std::uint64_t estimator_seed, std::span<double> out) {
            renewal::RenewalComparisonSpec spec{demand.sample(n_x, rng, "demand"),
                                                supply.sample(n_y, rng, "supply"), m_x, m_y};
            for (std::size_t j = 0; j < which.size(); ++j) {
                switch (which[j]) {
                case RenewalEstimator::classical_normal:
                    out[j] = renewal::classical_theta_normal(spec).estimate;
                    break;
                case RenewalEstimator::classical_exponential:
                    out[j] = renewal::classical_theta_exponential(spec).estimate;
                    break;
                case RenewalEstimator::resampling:
                    out[j] = renewal::resampling_theta(spec, realizations, estimator_seed).estimate;
                    break;
                }
            }
        });
}

TrialReport mc_alpha_moment(const GeneratorSpec& demand, const GeneratorSpec& supply, std::size_t n_x,
                            std::size_t n_y, std::size_t m_x, std::size_t m_y, std::size_t alpha_x,
                            std::size_t alpha_y, std::size_t trials, std::uint64_t seed)
{
    if (alpha_x > m_x || alpha_y > m_y || 2 * m_x - alpha_x > n_x || 2 * m_y - alpha_y > n_y) {
        fail(ErrorKind::invalid_input, "overlap pattern impossible for these sample sizes");
    }
    auto pair_sums = [](const Sample& s, std::size_t m, std::size_t alpha, CounterRng& rng) {
        const auto perm = draw_subsample(s.size(), s.size(), false, rng);
        double first = 0.0;
        double second = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            first += s[perm[j]];
        }
        for (std::size_t j = 0; j < alpha; ++j) {
            second += s[perm[j]];
        }
        for (std::size_t j = m; j < 2 * m - alpha; ++j) {
            second += s[perm[j]];
        }
        return std::pair{first, second};
    };
    return mc_estimator_distribution(trials, seed, 1,
                                     [&](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> out) {
                                         const auto hx = demand.sample(n_x, rng);
                                         const auto hy = supply.sample(n_y, rng);
                                         auto noise = CounterRng::stream(rng(), StreamDomain::oracle_alpha, 0);
                                         const auto [x1, x2] = pair_sums(hx, m_x, alpha_x, noise);
                                         const auto [y1, y2] = pair_sums(hy, m_y, alpha_y, noise);
                                         out[0] = (x1 > y1 && x2 > y2) ? 1.0 : 0.0;
                                     })
        .front();
}

FailureTrialSummary mc_failure_estimators(const failure::FailureModelSpec& spec,
                                          const GeneratorSpec& degeneration, std::size_t k,
                                          std::size_t l, std::size_t realizations,
                                          std::size_t pmf_terms, std::size_t trials, std::uint64_t seed)
{
    spec.validate();
    const GeneratorSpec arrivals{ExponentialGen{spec.rate}};
    const std::size_t outputs = 2 + 2 * pmf_terms;
    const auto reports = mc_estimator_distribution(
        trials, seed, outputs,
        [&](std::size_t, CounterRng& rng, std::uint64_t estimator_seed, std::span<double> out) {
            const failure::FailureSamples samples{arrivals.sample(k, rng, "A"), degeneration.sample(l, rng, "B")};
            const auto plug = failure::plugin_estimate(samples, spec.horizon);
            const auto res = failure::resampling_estimate(samples, spec.horizon, realizations, estimator_seed);
            out[0] = plug.initial.estimate;
            out[1] = res.initial.estimate;
            for (std::size_t i = 0; i < pmf_terms; ++i) {
                out[2 + i] = i < plug.initial_pmf.size() ? plug.initial_pmf[i] : 0.0;
                out[2 + pmf_terms + i] = i < res.initial_pmf.size() ? res.initial_pmf[i] : 0.0;
            }
        });
    FailureTrialSummary out;
    out.plugin_initial = reports[0];
    out.resampling_initial = reports[1];
    out.plugin_pmf.assign(reports.begin() + 2, reports.begin() + 2 + static_cast<std::ptrdiff_t>(pmf_terms));
    out.resampling_pmf.assign(reports.begin() + 2 + static_cast<std::ptrdiff_t>(pmf_terms), reports.end());
    return out;
}

std::vector<double> mc_true_pmf(const failure::FailureModelSpec& spec, const GeneratorSpec& degeneration,
                                std::size_t terms, std::size_t trials, std::uint64_t seed)
{
    spec.validate();
    const auto reports = mc_estimator_distribution(
        trials, seed, terms, [&](std::size_t, CounterRng& rng, std::uint64_t, std::span<double> out) {
            std::size_t present = 0;
            double tau = 0.0;
            while (true) {
                tau += -std::log(rng.uniform_open()) / spec.rate;
                if (tau > spec.horizon) {
                    break;
                }
                if (tau + degeneration.draw(rng) > spec.horizon) {
                    ++present;
                }
            }
            std::fill(out.begin(), out.end(), 0.0);
            if (present < terms) {
                out[present] = 1.0;
            }
        });
    std::vector<double> out;
    for (const auto& r : reports) {
        out.push_back(r.mean);
    }
    return out;
}

namespace {

/// Visits every mask over n bits with exactly k set bits (Gosper's hack).
template <class Visit>
void for_each_mask(std::size_t n, std::size_t k, Visit&& visit)
{
    if (n > 63 || k > n) {
        fail(ErrorKind::enumeration_cap_exceeded, "bitmask enumeration supports n <= 63");
    }
    if (k == 0) {
        visit(std::uint64_t{0});
        return;
    }
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << n;
    while (mask < limit) {
        visit(mask);
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

std::vector<double> gather(std::span<const double> values, std::uint64_t mask)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (mask >> i & 1U) {
            out.push_back(values[i]);
        }
    }
    return out;
}

void check_cap(double count, std::size_t cap)
{
    if (count > static_cast<double>(cap)) {
        fail(ErrorKind::enumeration_cap_exceeded,
             "exhaustive enumeration needs " + std::to_string(static_cast<long long>(count))
                 + " evaluations, above the cap; use Monte Carlo");
    }
}

}  // namespace

double exhaustive_resample_expectation(std::span<const double> values, std::size_t size,
                                       const std::function<double(std::span<const double>)>& functional,
                                       std::size_t cap)
{
    check_cap(binomial(values.size(), size), cap);
    NeumaierSum acc;
    std::size_t count = 0;
    for_each_mask(values.size(), size, [&](std::uint64_t mask) {
        const auto chosen = gather(values, mask);
        acc.add(functional(chosen));
        ++count;
    });
    return acc.value() / static_cast<double>(count);
}

double exhaustive_resample_expectation(
    std::span<const double> x, std::size_t size_x, std::span<const double> y, std::size_t size_y,
    const std::function<double(std::span<const double>, std::span<const double>)>& functional, std::size_t cap)
{
    check_cap(binomial(x.size(), size_x) * binomial(y.size(), size_y), cap);
    std::vector<std::vector<double>> ys;
    for_each_mask(y.size(), size_y, [&](std::uint64_t mask) { ys.push_back(gather(y, mask)); });
    NeumaierSum acc;
    std::size_t count = 0;
    for_each_mask(x.size(), size_x, [&](std::uint64_t mask) {
        const auto chosen = gather(x, mask);
        for (const auto& other : ys) {
            acc.add(functional(chosen, other));
            ++count;
        }
    });
    return acc.value() / static_cast<double>(count);
}

bool solve_normal_equations(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, Eigen::VectorXd& beta)
{
    const auto m = static_cast<std::size_t>(X.cols());
    const auto n = static_cast<std::size_t>(X.rows());
    // Augmented system [X'X | X'Y] in plain row-major storage.
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                s += X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i))
                     * X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
            }
            a[i][j] = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            s += X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) * Y(static_cast<Eigen::Index>(r));
        }
        a[i][m] = s;
        scale = std::max(scale, std::abs(a[i][i]));
    }
    const double tiny = 1e-11 * std::max(scale, 1e-300);
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) <= tiny) {
            return false;
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    beta.resize(static_cast<Eigen::Index>(m));
    for (std::size_t i = m; i-- > 0;) {
        double s = a[i][m];
        for (std::size_t j = i + 1; j < m; ++j) {
            s -= a[i][j] * beta(static_cast<Eigen::Index>(j));
        }
        beta(static_cast<Eigen::Index>(i)) = s / a[i][i];
    }
    return true;
}

SubsetAverage exhaustive_subset_lse(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, std::size_t k,
                                    std::size_t cap)
{
    const auto n = static_cast<std::size_t>(X.rows());
    check_cap(binomial(n, k), cap);
    SubsetAverage out;
    out.mean = Eigen::VectorXd::Zero(X.cols());
    Eigen::MatrixXd xs(static_cast<Eigen::Index>(k), X.cols());
    Eigen::VectorXd ys(static_cast<Eigen::Index>(k));
    Eigen::VectorXd beta;
    for_each_mask(n, k, [&](std::uint64_t mask) {
        Eigen::Index row = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) {
                xs.row(row) = X.row(static_cast<Eigen::Index>(i));
                ys(row) = Y(static_cast<Eigen::Index>(i));
                ++row;
            }
        }
        if (solve_normal_equations(xs, ys, beta)) {
            out.mean += beta;
            ++out.used;
        } else {
            ++out.singular;
        }
    });
    if (out.used == 0) {
        fail(ErrorKind::degenerate_dataset, "every subset design is singular");
    }
    out.mean /= static_cast<double>(out.used);
    return out;
}

DisturbedTrialSummary mc_disturbed_bias(const Eigen::MatrixXd& X, const regression::DisturbanceSpec& spec,
                                        std::size_t k, std::size_t trials, std::uint64_t seed)
{
    spec.validate(X);
    const auto m = static_cast<std::size_t>(X.cols());
    const Eigen::VectorXd mean = spec.expected_response(X);
    const double sd = std::sqrt(spec.noise_variance);
    const auto reports = mc_estimator_distribution(
        trials, seed, 2 * m, [&](std::size_t t, CounterRng&, std::uint64_t, std::span<double> out) {
            auto noise = CounterRng::stream(seed, StreamDomain::oracle_noise, t);
            Eigen::VectorXd y = mean;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                y(i) += sd * noise.standard_normal();
            }
            Eigen::VectorXd full;
            if (!solve_normal_equations(X, y, full)) {
                fail(ErrorKind::singular_design, "full design is singular");
            }
            const auto sub = exhaustive_subset_lse(X, y, k);
            for (std::size_t j = 0; j < m; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                out[j] = spec.beta_true(jj) - full(jj);
                out[m + j] = spec.beta_true(jj) - sub.mean(jj);
            }
        });
    DisturbedTrialSummary out;
    out.classical.assign(reports.begin(), reports.begin() + static_cast<std::ptrdiff_t>(m));
    out.resampling.assign(reports.begin() + static_cast<std::ptrdiff_t>(m), reports.end());
    return out;
}

Suite parse_suite(const std::string& name)
{
    if (name == "regression") {
        return Suite::regression;
    }
    if (name == "failure") {
        return Suite::failure;
    }
    if (name == "renewal") {
        return Suite::renewal;
    }
    fail(ErrorKind::usage, "unknown suite '" + name + "' (expected regression, failure or renewal)");
}

}  // namespace resample::oracle
