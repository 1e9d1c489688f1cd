#include "resample/core/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resample/core/error.hpp"

namespace resample {

std::uint64_t binomial_exact(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i is an integer at every step.
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::uint64_t>::max()) {
            fail(ErrorKind::out_of_range,
                 "C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(acc);
}

double log_binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double binomial(std::size_t n, std::size_t k)
{
    if (k > n) {
        return 0.0;
    }
    if (n <= 64) {
        return static_cast<double>(binomial_exact(n, k));
    }
    return std::exp(log_binomial(n, k));
}

double alpha_pair_probability(std::size_t sample_size, std::size_t resample_size,
                              std::size_t overlap)
{
    if (resample_size > sample_size) {
        fail(ErrorKind::invalid_input, "resample size exceeds sample size");
    }
    if (overlap > resample_size) {
        fail(ErrorKind::invalid_input, "overlap exceeds resample size");
    }
    const std::size_t rest = sample_size - resample_size;
    const std::size_t fresh = resample_size - overlap;
    if (fresh > rest) {
        return 0.0;
    }
    if (sample_size <= 64) {
        // Numerator terms are bounded by C(n, m) (Vandermonde), so all fit.
        const auto num = static_cast<long double>(binomial_exact(resample_size, overlap))
                         * static_cast<long double>(binomial_exact(rest, fresh));
        const auto den = static_cast<long double>(binomial_exact(sample_size, resample_size));
        return static_cast<double>(num / den);
    }
    return std::exp(log_binomial(resample_size, overlap) + log_binomial(rest, fresh)
                    - log_binomial(sample_size, resample_size));
}

}  // namespace resample
