#include "resample/renewal/inventory.hpp"

#include <cmath>
#include <string>

#include "resample/core/error.hpp"
#include "resample/renewal/renewal.hpp"

namespace resample::renewal {

void InventoryEconomics::validate() const
{
    for (double v : {c_d, c_s, b0, b1}) {
        if (!std::isfinite(v)) {
            fail(ErrorKind::invalid_input, "economics coefficients must be finite");
        }
    }
    if (k_min > k_max) {
        fail(ErrorKind::invalid_input, "empty K range");
    }
    if (m < 1) {
        fail(ErrorKind::invalid_input, "demand horizon m must be at least 1");
    }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double shortage_probability(std::size_t i, std::size_t k, const ProbabilitySource& source)
{
    if (i < 1) {
        fail(ErrorKind::invalid_input, "demand index is 1-based");
    }
    if (i <= k) {
        return 0.0;
    }
    const std::size_t m_y = i - k;
    const double theta = std::visit(
        overloaded{
            [&](const NormalTruth& s) { return theta_normal(s.mean_x, s.sd_x, s.mean_y, s.sd_y, i, m_y); },
            [&](const ExponentialTruth& s) { return theta_exponential(s.rate_x, s.rate_y, i, m_y); },
            [&](const ClassicalNormal& s) {
                return classical_theta_normal({s.demand, s.supply, i, m_y}).estimate;
            },
            [&](const ClassicalExponential& s) {
                return classical_theta_exponential({s.demand, s.supply, i, m_y}).estimate;
            },
            [&](const ResamplingSource& s) {
                if (s.demand.size() < 2 * i || s.supply.size() < 2 * m_y) {
                    fail(ErrorKind::insufficient_sample,
                         "resampling P_" + std::to_string(i) + "(" + std::to_string(k)
                             + ") needs n_x >= " + std::to_string(2 * i) + " and n_y >= "
                             + std::to_string(2 * m_y));
                }
                return resampling_theta({s.demand, s.supply, i, m_y}, s.realizations, s.seed).estimate;
            },
        },
        source);
    return 1.0 - theta;
}

std::vector<double> shortage_profile(std::size_t m, std::size_t k, const ProbabilitySource& source)
{
    std::vector<double> out(m);
    for (std::size_t i = 1; i <= m; ++i) {
        out[i - 1] = shortage_probability(i, k, source);
    }
    return out;
}

double average_damage(const InventoryEconomics& econ, std::size_t k, std::span<const double> probs)
{
    if (probs.size() != econ.m) {
        fail(ErrorKind::invalid_input, "need one shortage probability per demand");
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            fail(ErrorKind::invalid_input, "shortage probabilities must lie in [0, 1]");
        }
        total += p;
    }
    return econ.ordering_cost(k) + econ.c_s * total;
}

double average_income(const InventoryEconomics& econ, std::size_t k, std::span<const double> probs)
{
    return static_cast<double>(econ.m) * econ.c_d - average_damage(econ, k, probs);
}

OptimalInventory optimal_k(const InventoryEconomics& econ, const ProbabilitySource& source)
{
    econ.validate();
    OptimalInventory out;
    for (std::size_t k = econ.k_min; k <= econ.k_max; ++k) {
        const auto probs = shortage_profile(econ.m, k, source);
        ProfitPoint point{k, average_income(econ, k, probs), average_damage(econ, k, probs)};
        if (out.profile.empty() || point.income > out.income) {
            out.k = k;
            out.income = point.income;
        }
        out.profile.push_back(point);
    }
    return out;
}

}  // namespace resample::renewal
