#include "resample/core/sample.hpp"

#include <algorithm>
#include <cmath>

#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"

namespace resample {

Sample::Sample(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label))
{
    if (values_.empty()) {
        fail(ErrorKind::invalid_input, "sample '" + label_ + "' is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            fail(ErrorKind::invalid_input,
                 "sample '" + label_ + "' has a non-finite value at position "
                     + std::to_string(i + 1));
        }
    }
}

double Sample::sum() const { return compensated_sum(values_); }

double Sample::mean() const { return sum() / static_cast<double>(size()); }

double Sample::variance(std::size_t ddof) const
{
    if (size() <= ddof) {
        fail(ErrorKind::invalid_input,
             "variance needs more than " + std::to_string(ddof) + " values");
    }
    const double centre = mean();
    NeumaierSum acc;
    for (double v : values_) {
        acc.add((v - centre) * (v - centre));
    }
    return acc.value() / static_cast<double>(size() - ddof);
}

double Sample::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Sample::max() const { return *std::max_element(values_.begin(), values_.end()); }

}  // namespace resample
