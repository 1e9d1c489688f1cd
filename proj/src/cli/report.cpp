#include "resample/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "resample/core/csv.hpp"

namespace resample::cli {

Json to_json(const Report& report)
{
    Json out = Json::object();
    out["config"] = {{"argv", report.argv}};
    out["seed"] = report.seed ? Json(*report.seed) : Json(nullptr);
    out["results"] = report.results;
    if (!report.table.columns.empty()) {
        out["table"] = {{"columns", report.table.columns}, {"rows", report.table.rows}};
    }
    return out;
}

namespace {

std::string cell(const Json& value)
{
    if (value.is_null()) {
        return {};
    }
    if (value.is_number_float()) {
        return format_number(value.get<double>());
    }
    if (value.is_string()) {
        return value.get<std::string>();
    }
    return value.dump();
}

std::string join_argv(const std::vector<std::string>& argv)
{
    std::string out;
    for (const auto& a : argv) {
        if (!out.empty()) {
            out += ' ';
        }
        out += a;
    }
    return out;
}

std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

}  // namespace

std::string to_csv(const Report& report)
{
    std::ostringstream out;
    out << "# command: " << join_argv(report.argv) << '\n';
    out << "# seed: " << (report.seed ? std::to_string(*report.seed) : "none") << '\n';
    for (const auto& [key, value] : report.results.items()) {
        out << "# " << key << ": " << (value.is_number_float() ? format_number(value.get<double>()) : value.dump())
            << '\n';
    }
    if (!report.table.columns.empty()) {
        for (std::size_t j = 0; j < report.table.columns.size(); ++j) {
            out << (j ? "," : "") << report.table.columns[j];
        }
        out << '\n';
        for (const auto& row : report.table.rows) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                out << (j ? "," : "") << cell(row[j]);
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string emit_plot_data(std::string_view report_text, const std::string& x_column,
                           const std::vector<std::string>& series)
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    const auto first = report_text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && report_text[first] == '{') {
        Json doc;
        try {
            doc = Json::parse(report_text);
        } catch (const std::exception& e) {
            fail(ErrorKind::data, std::string("report is not valid JSON: ") + e.what());
        }
        if (!doc.contains("table")) {
            fail(ErrorKind::usage, "report has no table to plot");
        }
        columns = doc["table"]["columns"].get<std::vector<std::string>>();
        for (const auto& row : doc["table"]["rows"]) {
            std::vector<std::string> r;
            for (const auto& v : row) {
                r.push_back(cell(v));
            }
            rows.push_back(std::move(r));
        }
    } else {
        std::istringstream in{std::string(report_text)};
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || line.front() == '#') {
                continue;
            }
            if (columns.empty()) {
                columns = split(line, ',');
            } else {
                rows.push_back(split(line, ','));
            }
        }
    }
    auto index_of = [&](const std::string& name) {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            fail(ErrorKind::usage, "unknown series '" + name + "'");
        }
        return static_cast<std::size_t>(it - columns.begin());
    };
    const std::size_t xi = index_of(x_column);
    std::vector<std::size_t> si;
    for (const auto& s : series) {
        si.push_back(index_of(s));
    }
    std::ostringstream out;
    out << "x,series,value\n";
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < si.size(); ++j) {
            if (si[j] < row.size() && !row[si[j]].empty()) {
                out << row.at(xi) << ',' << series[j] << ',' << row[si[j]] << '\n';
            }
        }
    }
    return out.str();
}

std::vector<double> parse_vector(std::string_view text)
{
    std::vector<double> out;
    for (const auto& field : split(text, ',')) {
        std::string_view f = field;
        while (!f.empty() && f.front() == ' ') {
            f.remove_prefix(1);
        }
        while (!f.empty() && f.back() == ' ') {
            f.remove_suffix(1);
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
            fail(ErrorKind::usage, "'" + std::string(field) + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

oracle::GeneratorSpec parse_generator(std::string_view literal)
{
    const auto colon = literal.find(':');
    if (colon == std::string_view::npos) {
        fail(ErrorKind::usage, "distribution '" + std::string(literal) + "' must look like kind:p1,p2");
    }
    const std::string kind(literal.substr(0, colon));
    const auto rest = literal.substr(colon + 1);
    if (kind == "empirical") {
        return oracle::GeneratorSpec{oracle::EmpiricalGen{read_sample_csv(std::string(rest))}};
    }
    const auto p = parse_vector(rest);
    auto need = [&](std::size_t count) {
        if (p.size() != count) {
            fail(ErrorKind::usage, kind + " takes " + std::to_string(count) + " parameters");
        }
    };
    try {
        if (kind == "exponential") {
            need(1);
            return oracle::GeneratorSpec{oracle::ExponentialGen{p[0]}};
        }
        if (kind == "normal") {
            need(2);
            return oracle::GeneratorSpec{oracle::NormalGen{p[0], p[1]}};
        }
        if (kind == "triangular") {
            need(3);
            return oracle::GeneratorSpec{oracle::TriangularGen{p[0], p[1], p[2]}};
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::invalid_input) {
            fail(ErrorKind::usage, e.what());
        }
        throw;
    }
    fail(ErrorKind::usage, "unknown distribution kind '" + kind + "'");
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::usage:
        return 2;
    case ErrorKind::data:
        return 3;
    default:
        return 4;
    }
}

}  // namespace resample::cli
