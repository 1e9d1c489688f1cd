#pragma once

#include <optional>
#include <string_view>

namespace resample {

enum class EstimatorMethod { plug_in, resampling, classical };
enum class Provenance { analytic, empirical };

std::string_view to_string(EstimatorMethod method);
std::string_view to_string(Provenance provenance);

struct Quantity {
    double value = 0.0;
    Provenance provenance = Provenance::analytic;
};

/// Point estimate plus whatever is known about the estimator's sampling
/// distribution. Bias follows the convention bias = truth - expectation.
struct EstimatorReport {
    double estimate = 0.0;
    EstimatorMethod method = EstimatorMethod::plug_in;
    std::optional<Quantity> expectation;
    std::optional<Quantity> variance;
    std::optional<Quantity> bias;
    std::optional<Quantity> mse;

    /// Sets bias from the expectation (or from the estimate itself when no
    /// expectation is known) and mse = variance + bias^2 when a variance is
    /// present.
    void attach_truth(double truth);
};

}  // namespace resample
