#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "resample/core/rng.hpp"

namespace resample {

struct ResamplePlan {
    std::size_t resample_size = 1;
    std::size_t realizations = 1;
    /// Within-realization extraction. Elements always return to the sample
    /// between realizations.
    bool replacement = false;
    std::uint64_t seed = 0;

    /// Throws invalid-plan when the plan cannot run against a sample of the
    /// given size.
    void validate(std::size_t sample_size) const;
};

/// Draws `count` indices into a sample of `sample_size` elements: distinct
/// (uniform over all count-subsets, in extraction order) when replacement is
/// off, independent uniform otherwise.
std::vector<std::size_t> draw_subsample(std::size_t sample_size, std::size_t count,
                                        bool replacement, CounterRng& rng);

/// Reusable without-replacement drawer for hot loops. Every draw() starts
/// from the identity arrangement, so a realization's subset depends only on
/// its own stream.
class SubsampleDrawer {
public:
    explicit SubsampleDrawer(std::size_t sample_size);

    /// The first `count` entries of the returned span are the draw.
    std::span<const std::size_t> draw(std::size_t count, CounterRng& rng);

    /// Next element of an open-ended extraction started by reset().
    void reset() noexcept;
    std::size_t next(CounterRng& rng);
    std::size_t drawn() const noexcept { return drawn_; }
    std::size_t sample_size() const noexcept { return slots_.size(); }

private:
    std::vector<std::size_t> slots_;
    std::size_t drawn_ = 0;
};

/// Arithmetic mean over realizations.
double realization_mean(std::span<const double> values);

/// Moments of a random function phi over one realization (mu, mu2) and the
/// mixed moment over two distinct realizations (mu11).
struct MomentSet {
    double mu = 0.0;
    double mu2 = 0.0;
    double mu11 = 0.0;
};

/// Var of the r-realization mean: (mu2 + (r - 1) mu11) / r - mu^2.
double estimator_variance_from_moments(const MomentSet& moments, std::size_t realizations);

}  // namespace resample
