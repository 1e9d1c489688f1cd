#include "resample/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace resample {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

CounterRng CounterRng::stream(std::uint64_t seed, StreamDomain domain,
                              std::uint64_t index) noexcept
{
    std::uint64_t key = mix64(seed ^ static_cast<std::uint64_t>(domain));
    key = mix64(key + 0xD1B54A32D192ED03ULL * (index + 1));
    return CounterRng(key);
}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept
{
    if (bound <= 1) {
        return 0;
    }
    unsigned __int128 product =
        static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            product = static_cast<unsigned __int128>((*this)()) * bound;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

double CounterRng::standard_normal() noexcept
{
    double u1 = uniform_open();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace resample
