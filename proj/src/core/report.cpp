#include "resample/core/report.hpp"

namespace resample {

std::string_view to_string(EstimatorMethod method)
{
    switch (method) {
    case EstimatorMethod::plug_in: return "plug-in";
    case EstimatorMethod::resampling: return "resampling";
    case EstimatorMethod::classical: return "classical";
    }
    return "unknown";
}

std::string_view to_string(Provenance provenance)
{
    return provenance == Provenance::analytic ? "analytic" : "empirical";
}

void EstimatorReport::attach_truth(double truth)
{
    const Quantity centre = expectation.value_or(Quantity{estimate, Provenance::empirical});
    bias = Quantity{truth - centre.value, centre.provenance};
    if (variance) {
        const bool analytic = variance->provenance == Provenance::analytic
                              && centre.provenance == Provenance::analytic;
        mse = Quantity{variance->value + bias->value * bias->value,
                       analytic ? Provenance::analytic : Provenance::empirical};
    }
}

}  // namespace resample
