#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "resample/core/sample.hpp"

namespace resample::renewal {

/// Income c_d per fulfilled demand, penalty c_s per delayed demand, ordering
/// cost f(K) = b0 + b1 K, scanned over K in [k_min, k_max] for m demands.
struct InventoryEconomics {
    double c_d = 0.0;
    double c_s = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    std::size_t m = 1;

    void validate() const;
    double ordering_cost(std::size_t k) const { return b0 + b1 * static_cast<double>(k); }
};

struct NormalTruth {
    double mean_x = 0.0;
    double sd_x = 1.0;
    double mean_y = 0.0;
    double sd_y = 1.0;
};

struct ExponentialTruth {
    double rate_x = 1.0;
    double rate_y = 1.0;
};

struct ClassicalNormal {
    Sample demand;
    Sample supply;
};

struct ClassicalExponential {
    Sample demand;
    Sample supply;
};

struct ResamplingSource {
    Sample demand;
    Sample supply;
    std::size_t realizations = 1000;
    std::uint64_t seed = 0;
};

using ProbabilitySource =
    std::variant<NormalTruth, ExponentialTruth, ClassicalNormal, ClassicalExponential, ResamplingSource>;

/// Marginal probability that the i-th demand (1-based) finds no stock when
/// the initial level is K: 0 for i <= K, else 1 - P{D_i > S_(i-K)}.
double shortage_probability(std::size_t i, std::size_t k, const ProbabilitySource& source);

/// P_1(K) .. P_m(K).
std::vector<double> shortage_profile(std::size_t m, std::size_t k, const ProbabilitySource& source);

double average_damage(const InventoryEconomics& econ, std::size_t k, std::span<const double> probs);
double average_income(const InventoryEconomics& econ, std::size_t k, std::span<const double> probs);

struct ProfitPoint {
    std::size_t k = 0;
    double income = 0.0;
    double damage = 0.0;
};

struct OptimalInventory {
    std::size_t k = 0;
    double income = 0.0;
    std::vector<ProfitPoint> profile;
};

/// Scans the K range; ties go to the smaller K.
OptimalInventory optimal_k(const InventoryEconomics& econ, const ProbabilitySource& source);

}  // namespace resample::renewal
