#include "resample/core/resample.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "resample/core/error.hpp"
#include "resample/core/numeric.hpp"

namespace resample {

void ResamplePlan::validate(std::size_t sample_size) const
{
    if (resample_size == 0) {
        fail(ErrorKind::invalid_plan, "resample size must be positive");
    }
    if (realizations == 0) {
        fail(ErrorKind::invalid_plan, "at least one realization is required");
    }
    if (!replacement && resample_size > sample_size) {
        fail(ErrorKind::invalid_plan,
             "cannot extract " + std::to_string(resample_size)
                 + " elements without replacement from a sample of "
                 + std::to_string(sample_size));
    }
}

std::vector<std::size_t> draw_subsample(std::size_t sample_size, std::size_t count,
                                        bool replacement, CounterRng& rng)
{
    if (sample_size == 0) {
        fail(ErrorKind::invalid_plan, "cannot draw from an empty sample");
    }
    std::vector<std::size_t> out;
    out.reserve(count);
    if (replacement) {
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(static_cast<std::size_t>(rng.below(sample_size)));
        }
        return out;
    }
    if (count > sample_size) {
        fail(ErrorKind::invalid_plan,
             "count " + std::to_string(count) + " exceeds sample size "
                 + std::to_string(sample_size) + " without replacement");
    }
    SubsampleDrawer drawer(sample_size);
    auto drawn = drawer.draw(count, rng);
    out.assign(drawn.begin(), drawn.end());
    return out;
}

SubsampleDrawer::SubsampleDrawer(std::size_t sample_size) : slots_(sample_size)
{
    reset();
}

void SubsampleDrawer::reset() noexcept
{
    std::iota(slots_.begin(), slots_.end(), std::size_t{0});
    drawn_ = 0;
}

std::size_t SubsampleDrawer::next(CounterRng& rng)
{
    if (drawn_ >= slots_.size()) {
        fail(ErrorKind::sample_exhausted, "all sample elements already extracted");
    }
    const auto remaining = slots_.size() - drawn_;
    const auto pick = drawn_ + static_cast<std::size_t>(rng.below(remaining));
    std::swap(slots_[drawn_], slots_[pick]);
    return slots_[drawn_++];
}

std::span<const std::size_t> SubsampleDrawer::draw(std::size_t count, CounterRng& rng)
{
    if (count > slots_.size()) {
        fail(ErrorKind::invalid_plan, "draw larger than the sample");
    }
    reset();
    for (std::size_t i = 0; i < count; ++i) {
        next(rng);
    }
    return {slots_.data(), count};
}

double realization_mean(std::span<const double> values)
{
    if (values.empty()) {
        fail(ErrorKind::invalid_input, "mean of an empty list of realizations");
    }
    return compensated_sum(values) / static_cast<double>(values.size());
}

double estimator_variance_from_moments(const MomentSet& moments, std::size_t realizations)
{
    if (realizations < 1) {
        fail(ErrorKind::invalid_input, "realizations must be at least 1");
    }
    const double r = static_cast<double>(realizations);
    const double second = (moments.mu2 + (r - 1.0) * moments.mu11) / r;
    return second - moments.mu * moments.mu;
}

}  // namespace resample
