#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace resample {

/// C(n, k) as an exact integer; valid while the result fits in 64 bits
/// (always for n <= 64). Throws out-of-range otherwise.
std::uint64_t binomial_exact(std::size_t n, std::size_t k);

/// C(n, k) as a double: exact for n <= 64, log-gamma beyond.
double binomial(std::size_t n, std::size_t k);

double log_binomial(std::size_t n, std::size_t k);

/// Probability that two independent uniform m-subsets of an n-element
/// sample share exactly `overlap` elements (hypergeometric).
double alpha_pair_probability(std::size_t sample_size, std::size_t resample_size,
                              std::size_t overlap);

/// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic
/// order. Returning false from visit stops the walk.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit)
{
    if (k > n) {
        return;
    }
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = i;
    }
    while (true) {
        if constexpr (std::is_same_v<decltype(visit(std::span<const std::size_t>(idx))), bool>) {
            if (!visit(std::span<const std::size_t>(idx))) {
                return;
            }
        } else {
            visit(std::span<const std::size_t>(idx));
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

}  // namespace resample
