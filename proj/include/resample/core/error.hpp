#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resample {

enum class ErrorKind {
    invalid_input,
    invalid_plan,
    singular_design,
    degenerate_dataset,
    screening_unavailable,
    undefined_rate,
    sample_exhausted,
    out_of_range,
    insufficient_sample,
    enumeration_cap_exceeded,
    trial_failures,
    data,
    usage,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so front ends can map
/// it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
    throw Error(kind, message);
}

}  // namespace resample
