#include "resample/renewal/renewal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"
#include "resample/core/resample.hpp"
#include "resample/core/rng.hpp"

namespace resample::renewal {

int psi(std::span<const double> x, std::span<const double> y)
{
    double sx = 0.0;
    double sy = 0.0;
    for (double v : x) {
        sx += v;
    }
    for (double v : y) {
        sy += v;
    }
    return sx > sy ? 1 : 0;
}

void RenewalComparisonSpec::validate() const
{
    if (m_x < 1) {
        fail(ErrorKind::invalid_input, "m_x must be at least 1");
    }
    if (m_y > m_x) {
        fail(ErrorKind::invalid_input, "m_y must not exceed m_x");
    }
    if (demand.size() < 2 * m_x || supply.size() < 2 * m_y) {
        fail(ErrorKind::invalid_plan,
             "each sample must hold at least twice its resample size (n_x=" + std::to_string(demand.size())
                 + ", m_x=" + std::to_string(m_x) + ", n_y=" + std::to_string(supply.size())
                 + ", m_y=" + std::to_string(m_y) + ")");
    }
}

double theta_exponential(double rate_x, double rate_y, std::size_t m_x, std::size_t m_y)
{
    if (!(rate_x > 0.0) || !(rate_y > 0.0) || !std::isfinite(rate_x) || !std::isfinite(rate_y)) {
        fail(ErrorKind::invalid_input, "exponential rates must be positive and finite");
    }
    if (m_y == 0) {
        return 1.0;
    }
    // At least m_y supply events before the m_x-th demand event.
    const double log_p = std::log(rate_y / (rate_x + rate_y));
    const double log_q = std::log(rate_x / (rate_x + rate_y));
    NeumaierSum acc;
    for (std::size_t i = 0; i < m_x; ++i) {
        acc.add(std::exp(log_binomial(m_y - 1 + i, i) + static_cast<double>(m_y) * log_p
                         + static_cast<double>(i) * log_q));
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

double theta_normal(double mean_x, double sd_x, double mean_y, double sd_y, std::size_t m_x,
                    std::size_t m_y)
{
    if (!(sd_x >= 0.0) || !(sd_y >= 0.0)) {
        fail(ErrorKind::invalid_input, "standard deviations must be non-negative");
    }
    const double drift = static_cast<double>(m_x) * mean_x - static_cast<double>(m_y) * mean_y;
    const double var = static_cast<double>(m_x) * sd_x * sd_x + static_cast<double>(m_y) * sd_y * sd_y;
    if (var == 0.0) {
        return drift > 0.0 ? 1.0 : 0.0;
    }
    return normal_cdf(drift / std::sqrt(var));
}

EstimatorReport classical_theta_exponential(const RenewalComparisonSpec& spec)
{
    if (spec.m_x < 1 || spec.m_y > spec.m_x) {
        fail(ErrorKind::invalid_input, "need m_x >= 1 and m_y <= m_x");
    }
    if (spec.demand.min() <= 0.0 || spec.supply.min() <= 0.0) {
        fail(ErrorKind::invalid_input, "exponential model needs strictly positive intervals");
    }
    EstimatorReport out;
    out.method = EstimatorMethod::classical;
    const double rate_x = static_cast<double>(spec.demand.size()) / spec.demand.sum();
    const double rate_y = static_cast<double>(spec.supply.size()) / spec.supply.sum();
    out.estimate = theta_exponential(rate_x, rate_y, spec.m_x, spec.m_y);
    return out;
}

EstimatorReport classical_theta_normal(const RenewalComparisonSpec& spec)
{
    if (spec.m_x < 1 || spec.m_y > spec.m_x) {
        fail(ErrorKind::invalid_input, "need m_x >= 1 and m_y <= m_x");
    }
    if (spec.demand.size() < 2 || spec.supply.size() < 2) {
        fail(ErrorKind::insufficient_sample, "normal model needs at least two values per sample");
    }
    EstimatorReport out;
    out.method = EstimatorMethod::classical;
    if (spec.m_y == 0) {
        out.estimate = 1.0;
        return out;
    }
    out.estimate = theta_normal(spec.demand.mean(), std::sqrt(spec.demand.variance(0)), spec.supply.mean(),
                                std::sqrt(spec.supply.variance(0)), spec.m_x, spec.m_y);
    return out;
}

EstimatorReport resampling_theta(const RenewalComparisonSpec& spec, std::size_t realizations,
                                 std::uint64_t seed)
{
    spec.validate();
    if (realizations < 1) {
        fail(ErrorKind::invalid_plan, "at least one realization is required");
    }
    SubsampleDrawer dx(spec.demand.size());
    SubsampleDrawer dy(spec.supply.size());
    const auto xs = spec.demand.values();
    const auto ys = spec.supply.values();
    std::uint64_t hits = 0;
    for (std::size_t q = 0; q < realizations; ++q) {
        auto rng = CounterRng::stream(seed, StreamDomain::renewal, q);
        double sx = 0.0;
        for (std::size_t i : dx.draw(spec.m_x, rng)) {
            sx += xs[i];
        }
        double sy = 0.0;
        for (std::size_t i : dy.draw(spec.m_y, rng)) {
            sy += ys[i];
        }
        hits += sx > sy ? 1 : 0;
    }
    EstimatorReport out;
    out.method = EstimatorMethod::resampling;
    out.estimate = static_cast<double>(hits) / static_cast<double>(realizations);
    return out;
}

AlphaVarianceResult combine_alpha_cells(std::vector<AlphaCell> cells, double mu, double mu_squared,
                                        std::size_t realizations)
{
    AlphaVarianceResult out;
    NeumaierSum total_p;
    NeumaierSum acc;
    for (const auto& c : cells) {
        total_p.add(c.probability);
        acc.add(c.probability * c.conditional_moment);
    }
    if (std::abs(total_p.value() - 1.0) > 1e-9) {
        fail(ErrorKind::invalid_input, "alpha-cell probabilities do not sum to one");
    }
    out.cells = std::move(cells);
    out.mu = mu;
    out.mu11 = acc.value();
    out.mu_squared = mu_squared;
    const double r = static_cast<double>(realizations);
    // For an indicator, mu2 = mu.
    out.raw_variance = (mu + (r - 1.0) * out.mu11) / r - mu_squared;
    out.variance = std::max(0.0, out.raw_variance);
    return out;
}

namespace {

struct SubsetSums {
    std::vector<std::uint64_t> masks;
    std::vector<double> sums;
};

SubsetSums enumerate_subsets(std::span<const double> values, std::size_t m)
{
    SubsetSums out;
    for_each_combination(values.size(), m, [&](std::span<const std::size_t> idx) {
        std::uint64_t mask = 0;
        double s = 0.0;
        for (std::size_t i : idx) {
            mask |= std::uint64_t{1} << i;
            s += values[i];
        }
        out.masks.push_back(mask);
        out.sums.push_back(s);
    });
    return out;
}

struct Point {
    double first;
    double second;
};

/// Ordered subset pairs bucketed by overlap, each bucket sorted by `first`.
std::vector<std::vector<Point>> pair_points(const SubsetSums& subsets, std::size_t m)
{
    std::vector<std::vector<Point>> buckets(m + 1);
    const std::size_t count = subsets.masks.size();
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            const auto overlap = static_cast<std::size_t>(std::popcount(subsets.masks[i] & subsets.masks[j]));
            buckets[overlap].push_back({subsets.sums[i], subsets.sums[j]});
        }
    }
    for (auto& b : buckets) {
        std::sort(b.begin(), b.end(), [](const Point& a, const Point& c) { return a.first < c.first; });
    }
    return buckets;
}

/// Number of (p, q) with p.first > q.first and p.second > q.second.
std::uint64_t dominance_count(const std::vector<Point>& xs, const std::vector<Point>& ys)
{
    std::vector<double> keys;
    keys.reserve(ys.size());
    for (const auto& q : ys) {
        keys.push_back(q.second);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<std::uint64_t> tree(keys.size() + 1, 0);
    auto add = [&](std::size_t pos) {
        for (++pos; pos < tree.size(); pos += pos & (~pos + 1)) {
            ++tree[pos];
        }
    };
    auto prefix = [&](std::size_t len) {
        std::uint64_t s = 0;
        for (; len > 0; len -= len & (~len + 1)) {
            s += tree[len];
        }
        return s;
    };
    std::uint64_t total = 0;
    std::size_t next = 0;
    for (const auto& p : xs) {
        while (next < ys.size() && ys[next].first < p.first) {
            const auto pos = static_cast<std::size_t>(
                std::lower_bound(keys.begin(), keys.end(), ys[next].second) - keys.begin());
            add(pos);
            ++next;
        }
        const auto below = static_cast<std::size_t>(
            std::lower_bound(keys.begin(), keys.end(), p.second) - keys.begin());
        total += prefix(below);
    }
    return total;
}

std::uint64_t count_greater(std::span<const double> xs, std::vector<double> ys)
{
    std::sort(ys.begin(), ys.end());
    std::uint64_t total = 0;
    for (double x : xs) {
        total += static_cast<std::uint64_t>(std::lower_bound(ys.begin(), ys.end(), x) - ys.begin());
    }
    return total;
}

bool enumerable(const RenewalComparisonSpec& spec, std::size_t cap)
{
    const double cx = binomial(spec.demand.size(), spec.m_x);
    const double cy = binomial(spec.supply.size(), spec.m_y);
    return spec.demand.size() <= 64 && spec.supply.size() <= 64 && cx * cx <= static_cast<double>(cap)
           && cy * cy <= static_cast<double>(cap);
}

double subset_sum(std::span<const double> values, std::span<const std::size_t> idx)
{
    double s = 0.0;
    for (std::size_t i : idx) {
        s += values[i];
    }
    return s;
}

/// Monte Carlo over ordered subset pairs with fixed overlaps.
AlphaVarianceResult mc_alpha(const RenewalComparisonSpec& spec, std::size_t realizations,
                             const AlphaOptions& options)
{
    const auto xs = spec.demand.values();
    const auto ys = spec.supply.values();
    const std::size_t draws = std::max<std::size_t>(options.mc_pairs, 2);
    const double nd = static_cast<double>(draws);
    SubsampleDrawer dx(xs.size());
    SubsampleDrawer dy(ys.size());
    std::vector<std::size_t> second;

    auto pair_sums = [&](SubsampleDrawer& drawer, std::span<const double> values, std::size_t m,
                         std::size_t alpha, CounterRng& rng, double& s1, double& s2) {
        const auto perm = drawer.draw(values.size(), rng);
        s1 = subset_sum(values, perm.subspan(0, m));
        s2 = subset_sum(values, perm.subspan(0, alpha)) + subset_sum(values, perm.subspan(m, m - alpha));
    };

    std::vector<AlphaCell> cells;
    std::uint64_t cell_index = 0;
    double se_mu00 = 0.0;
    double mu00 = 0.0;
    double mu11_var = 0.0;
    for (std::size_t ax = 0; ax <= spec.m_x; ++ax) {
        const double px = alpha_pair_probability(xs.size(), spec.m_x, ax);
        for (std::size_t ay = 0; ay <= spec.m_y; ++ay) {
            AlphaCell cell{ax, ay, px * alpha_pair_probability(ys.size(), spec.m_y, ay), 0.0, std::nullopt};
            ++cell_index;
            if (cell.probability == 0.0) {
                cells.push_back(cell);
                continue;
            }
            std::uint64_t hits = 0;
            for (std::size_t t = 0; t < draws; ++t) {
                auto rng = CounterRng::stream(options.seed ^ mix64(cell_index), StreamDomain::renewal, t);
                double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
                pair_sums(dx, xs, spec.m_x, ax, rng, x1, x2);
                pair_sums(dy, ys, spec.m_y, ay, rng, y1, y2);
                hits += (x1 > y1 && x2 > y2) ? 1 : 0;
            }
            cell.conditional_moment = static_cast<double>(hits) / nd;
            const double se2 = cell.conditional_moment * (1.0 - cell.conditional_moment) / nd;
            cell.standard_error = std::sqrt(se2);
            mu11_var += cell.probability * cell.probability * se2;
            if (ax == 0 && ay == 0) {
                mu00 = cell.conditional_moment;
                se_mu00 = std::sqrt(se2);
            }
            cells.push_back(cell);
        }
    }
    std::uint64_t hits = 0;
    for (std::size_t t = 0; t < draws; ++t) {
        auto rng = CounterRng::stream(options.seed ^ mix64(0), StreamDomain::renewal, t);
        const double sx = subset_sum(xs, dx.draw(spec.m_x, rng));
        const double sy = subset_sum(ys, dy.draw(spec.m_y, rng));
        hits += sx > sy ? 1 : 0;
    }
    const double mu = static_cast<double>(hits) / nd;
    auto out = combine_alpha_cells(std::move(cells), mu, mu00, realizations);
    out.exhaustive = false;
    const double r = static_cast<double>(realizations);
    const double se_mu2 = mu * (1.0 - mu) / nd;
    out.standard_error = std::sqrt(se_mu2 / (r * r) + ((r - 1.0) / r) * ((r - 1.0) / r) * mu11_var
                                   + se_mu00 * se_mu00);
    return out;
}

}  // namespace

double exact_resampling_mean(const RenewalComparisonSpec& spec)
{
    spec.validate();
    const auto sx = enumerate_subsets(spec.demand.values(), spec.m_x);
    const auto sy = enumerate_subsets(spec.supply.values(), spec.m_y);
    const auto hits = count_greater(sx.sums, sy.sums);
    return static_cast<double>(hits)
           / (static_cast<double>(sx.sums.size()) * static_cast<double>(sy.sums.size()));
}

AlphaVarianceResult theta_variance_alpha(const RenewalComparisonSpec& spec, std::size_t realizations,
                                         const AlphaOptions& options)
{
    spec.validate();
    if (realizations < 1) {
        fail(ErrorKind::invalid_plan, "at least one realization is required");
    }
    if (!enumerable(spec, options.point_cap)) {
        return mc_alpha(spec, realizations, options);
    }
    const auto sx = enumerate_subsets(spec.demand.values(), spec.m_x);
    const auto sy = enumerate_subsets(spec.supply.values(), spec.m_y);
    const double mu = static_cast<double>(count_greater(sx.sums, sy.sums))
                      / (static_cast<double>(sx.sums.size()) * static_cast<double>(sy.sums.size()));
    const auto px = pair_points(sx, spec.m_x);
    const auto py = pair_points(sy, spec.m_y);
    std::vector<AlphaCell> cells;
    double mu00 = 0.0;
    for (std::size_t ax = 0; ax <= spec.m_x; ++ax) {
        for (std::size_t ay = 0; ay <= spec.m_y; ++ay) {
            AlphaCell cell{ax, ay,
                           alpha_pair_probability(spec.demand.size(), spec.m_x, ax)
                               * alpha_pair_probability(spec.supply.size(), spec.m_y, ay),
                           0.0, std::nullopt};
            if (!px[ax].empty() && !py[ay].empty()) {
                cell.conditional_moment = static_cast<double>(dominance_count(px[ax], py[ay]))
                                          / (static_cast<double>(px[ax].size()) * static_cast<double>(py[ay].size()));
            }
            if (ax == 0 && ay == 0) {
                mu00 = cell.conditional_moment;
            }
            cells.push_back(cell);
        }
    }
    return combine_alpha_cells(std::move(cells), mu, mu00, realizations);
}

AlphaVarianceResult theta_variance_alpha_normal(double mean_x, double sd_x, double mean_y, double sd_y,
                                                std::size_t n_x, std::size_t n_y, std::size_t m_x,
                                                std::size_t m_y, std::size_t realizations)
{
    if (m_x < 1 || m_y > m_x || n_x < m_x || n_y < m_y) {
        fail(ErrorKind::invalid_input, "need 1 <= m_x, m_y <= m_x, and m_i <= n_i");
    }
    if (!(sd_x > 0.0) || !(sd_y >= 0.0)) {
        fail(ErrorKind::invalid_input, "demand sd must be positive, supply sd non-negative");
    }
    if (realizations < 1) {
        fail(ErrorKind::invalid_plan, "at least one realization is required");
    }
    const double vx = sd_x * sd_x;
    const double vy = sd_y * sd_y;
    const double var = static_cast<double>(m_x) * vx + static_cast<double>(m_y) * vy;
    const double h = -(static_cast<double>(m_x) * mean_x - static_cast<double>(m_y) * mean_y) / std::sqrt(var);
    const double mu = theta_normal(mean_x, sd_x, mean_y, sd_y, m_x, m_y);
    std::vector<AlphaCell> cells;
    for (std::size_t ax = 0; ax <= m_x; ++ax) {
        for (std::size_t ay = 0; ay <= m_y; ++ay) {
            AlphaCell cell{ax, ay, alpha_pair_probability(n_x, m_x, ax) * alpha_pair_probability(n_y, m_y, ay),
                           0.0, std::nullopt};
            const double rho = (static_cast<double>(ax) * vx + static_cast<double>(ay) * vy) / var;
            cell.conditional_moment = bivariate_normal_upper_orthant(h, rho);
            cells.push_back(cell);
        }
    }
    return combine_alpha_cells(std::move(cells), mu, mu * mu, realizations);
}

}  // namespace resample::renewal
