#include "resample/core/parallel.hpp"

#include <cstdlib>
#include <string>

namespace resample {

std::size_t worker_count()
{
    if (const char* env = std::getenv("RESAMPLE_THREADS")) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) {
                return n;
            }
        } catch (...) {
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace resample
