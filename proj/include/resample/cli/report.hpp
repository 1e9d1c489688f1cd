#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resample/core/error.hpp"
#include "resample/oracle/oracle.hpp"

namespace resample::cli {

using Json = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

/// What every command writes: the invocation, the seed, named results and an
/// optional table.
struct Report {
    std::vector<std::string> argv;
    std::optional<std::uint64_t> seed;
    Json results = Json::object();
    Table table;
};

Json to_json(const Report& report);
/// '#' comment lines for the invocation, seed and results, then the table.
std::string to_csv(const Report& report);

/// Long-format plot data (x, series, value) from a report produced by this
/// tool, JSON or CSV.
std::string emit_plot_data(std::string_view report_text, const std::string& x_column,
                           const std::vector<std::string>& series);

/// Distribution literal `kind:p1,p2[,p3]`; `empirical:path` reads a sample CSV.
oracle::GeneratorSpec parse_generator(std::string_view literal);
std::vector<double> parse_vector(std::string_view text);

/// 2 = usage, 3 = data, 4 = model.
int exit_code(ErrorKind kind);

}  // namespace resample::cli
