#include "resample/core/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "resample/core/error.hpp"

namespace resample {
namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double parse_number(std::string_view field, std::size_t line_no)
{
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        fail(ErrorKind::data, "line " + std::to_string(line_no) + ": '"
                                  + std::string(field) + "' is not a number");
    }
    return value;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::data, "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<double> NumericTable::column(std::size_t j) const
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(row.at(j));
    }
    return out;
}

NumericTable parse_numeric_csv(std::string_view text)
{
    NumericTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = split(line);
        if (table.header.empty()) {
            for (auto f : fields) {
                table.header.emplace_back(f);
            }
            continue;
        }
        if (fields.size() != table.header.size()) {
            fail(ErrorKind::data, "line " + std::to_string(line_no) + ": expected "
                                      + std::to_string(table.header.size()) + " fields, got "
                                      + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            row.push_back(parse_number(f, line_no));
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        fail(ErrorKind::data, "missing header line");
    }
    return table;
}

NumericTable read_numeric_csv(const std::filesystem::path& path)
{
    return parse_numeric_csv(slurp(path));
}

Sample parse_sample_csv(std::string_view text, std::string label)
{
    auto table = parse_numeric_csv(text);
    if (table.header.size() != 1 || table.header[0] != "value") {
        fail(ErrorKind::data, "sample CSV must have the single header 'value'");
    }
    if (table.rows.empty()) {
        fail(ErrorKind::data, "sample CSV has no values");
    }
    try {
        return Sample(table.column(0), std::move(label));
    } catch (const Error& e) {
        fail(ErrorKind::data, e.what());
    }
}

Sample read_sample_csv(const std::filesystem::path& path)
{
    return parse_sample_csv(slurp(path), path.stem().string());
}

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, ptr);
}

}  // namespace resample
