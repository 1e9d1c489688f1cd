#include "resample/core/error.hpp"

namespace resample {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_plan: return "invalid-plan";
    case ErrorKind::singular_design: return "singular-design";
    case ErrorKind::degenerate_dataset: return "degenerate-dataset";
    case ErrorKind::screening_unavailable: return "screening-unavailable";
    case ErrorKind::undefined_rate: return "undefined-rate";
    case ErrorKind::sample_exhausted: return "sample-exhausted";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::insufficient_sample: return "insufficient-sample";
    case ErrorKind::enumeration_cap_exceeded: return "enumeration-cap-exceeded";
    case ErrorKind::trial_failures: return "trial-failures";
    case ErrorKind::data: return "data";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

}  // namespace resample
