#pragma once

#include <cstdint>
#include <limits>

namespace resample {

/// Seed domains keep estimator streams and oracle streams disjoint, so a
/// validation run never replays the randomness of the thing it checks.
enum class StreamDomain : std::uint64_t {
    subsample = 0x5eed'0001,
    regression = 0x5eed'0002,
    failure = 0x5eed'0003,
    renewal = 0x5eed'0004,
    inventory = 0x5eed'0005,
    oracle_samples = 0x0ac1'0001,
    oracle_noise = 0x0ac1'0002,
    oracle_alpha = 0x0ac1'0003,
    oracle_estimator_seed = 0x0ac1'0004,
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: output n is a keyed hash of n. Streams are
/// derived from (seed, domain, index) and never share state, so realization
/// l produces the same draws whether it runs first, last, or on another
/// thread.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) noexcept : key_(mix64(key)) {}

    static CounterRng stream(std::uint64_t seed, StreamDomain domain,
                             std::uint64_t index) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        return mix64(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1); safe to pass to log().
    double uniform_open() noexcept
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Standard normal deviate by Box-Muller; always consumes two draws.
    double standard_normal() noexcept;

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace resample
