#pragma once

#include <string>
#include <variant>

#include "resample/core/sample.hpp"

namespace resample::failure {

struct Exponential {
    double rate = 1.0;
};

struct Triangular {
    double min = 0.0;
    double mode = 0.0;
    double max = 1.0;
};

struct Empirical {
    Sample sample;
};

/// Distribution F of the time B an initial failure takes to degenerate.
/// Supports closed-form integrals of F and 1 - F over [0, t], so the model's
/// characteristics carry no quadrature error.
class DegenerationDistribution {
public:
    using Kind = std::variant<Exponential, Triangular, Empirical>;

    explicit DegenerationDistribution(Kind kind);

    const Kind& kind() const noexcept { return kind_; }

    double cdf(double x) const;
    /// Integral of 1 - F(x) over [0, t], i.e. E[min(B, t)].
    double integrated_survival(double t) const;
    /// Integral of F(x) over [0, t].
    double integrated_cdf(double t) const;
    double mean() const;
    std::string describe() const;

private:
    Kind kind_;
};

}  // namespace resample::failure
