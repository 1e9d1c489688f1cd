#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace resample {

/// An ordered, immutable collection of finite observations. Indices are
/// stable identities, so subsample bookkeeping can refer to elements by
/// position.
class Sample {
public:
    explicit Sample(std::vector<double> values, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double sum() const;
    double mean() const;
    /// Variance with divisor n - ddof.
    double variance(std::size_t ddof = 1) const;
    double min() const;
    double max() const;

private:
    std::vector<double> values_;
    std::string label_;
};

}  // namespace resample
