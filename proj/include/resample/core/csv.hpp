#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "resample/core/sample.hpp"

namespace resample {

struct NumericTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(std::size_t j) const;
};

/// Parses a header line plus rows of numbers. Blank lines and lines starting
/// with '#' are skipped. Throws a data error on malformed input.
NumericTable parse_numeric_csv(std::string_view text);
NumericTable read_numeric_csv(const std::filesystem::path& path);

/// Sample CSV: header `value`, one number per line.
Sample parse_sample_csv(std::string_view text, std::string label);
Sample read_sample_csv(const std::filesystem::path& path);

/// Shortest decimal that round-trips, always with '.' as the separator.
std::string format_number(double value);

}  // namespace resample
