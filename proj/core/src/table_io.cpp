#include "saweit/table_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "saweit/errors.hpp"

namespace saweit {
namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("CSV: cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Text columns in the header carry a "#" prefix so import knows their type.
constexpr std::string_view kTextMarker = "#";

nlohmann::json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_number(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

void DataTable::add_row(std::vector<double> values, std::vector<std::string> labels) {
  if (values.size() != numeric_columns.size() || labels.size() != text_columns.size()) {
    throw std::invalid_argument("DataTable: row width does not match columns");
  }
  numeric.push_back(std::move(values));
  text.push_back(std::move(labels));
}

std::size_t DataTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < numeric_columns.size(); ++k) {
    if (numeric_columns[k] == name) return k;
  }
  throw std::out_of_range("DataTable: no numeric column " + std::string(name));
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

std::string to_csv(const DataTable& table) {
  std::string out;
  bool first = true;
  for (const auto& c : table.numeric_columns) {
    out += (first ? "" : ",") + c;
    first = false;
  }
  for (const auto& c : table.text_columns) {
    out += (first ? "" : ",") + std::string(kTextMarker) + c;
    first = false;
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    first = true;
    for (double v : table.numeric[r]) {
      out += (first ? "" : ",") + format_number(v);
      first = false;
    }
    for (const auto& s : table.text[r]) {
      if (s.find_first_of(",\n") != std::string::npos) {
        throw std::invalid_argument("CSV: annotation contains a separator");
      }
      out += (first ? "" : ",") + s;
      first = false;
    }
    out += '\n';
  }
  return out;
}

DataTable from_csv(std::string_view text) {
  DataTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV: missing header");
  for (auto& name : split(line)) {
    if (name.starts_with(kTextMarker)) {
      table.text_columns.push_back(name.substr(kTextMarker.size()));
    } else {
      table.numeric_columns.push_back(name);
    }
  }
  const std::size_t nnum = table.numeric_columns.size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != nnum + table.text_columns.size()) {
      throw std::runtime_error("CSV: ragged row");
    }
    std::vector<double> values;
    for (std::size_t k = 0; k < nnum; ++k) values.push_back(parse_number(cells[k]));
    table.add_row(std::move(values), {cells.begin() + static_cast<std::ptrdiff_t>(nnum), cells.end()});
  }
  return table;
}

nlohmann::json to_json(const DataTable& table, const nlohmann::json& config_echo) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t k = 0; k < table.numeric_columns.size(); ++k) {
      row[table.numeric_columns[k]] = number_to_json(table.numeric[r][k]);
    }
    for (std::size_t k = 0; k < table.text_columns.size(); ++k) {
      row[table.text_columns[k]] = table.text[r][k];
    }
    rows.push_back(std::move(row));
  }
  return {{"schema_version", kSchemaVersion},
          {"config_echo", config_echo},
          {"columns", {{"numeric", table.numeric_columns}, {"text", table.text_columns}}},
          {"rows", std::move(rows)}};
}

DataTable from_json(const nlohmann::json& doc) {
  if (doc.value("schema_version", 0) != kSchemaVersion) {
    throw std::runtime_error("JSON: unsupported schema_version");
  }
  DataTable table;
  table.numeric_columns = doc.at("columns").at("numeric").get<std::vector<std::string>>();
  table.text_columns = doc.at("columns").at("text").get<std::vector<std::string>>();
  for (const auto& row : doc.at("rows")) {
    std::vector<double> values;
    for (const auto& c : table.numeric_columns) values.push_back(number_from_json(row.at(c)));
    std::vector<std::string> labels;
    for (const auto& c : table.text_columns) labels.push_back(row.at(c).get<std::string>());
    table.add_row(std::move(values), std::move(labels));
  }
  return table;
}

void export_table(const DataTable& table, Format format, const std::filesystem::path& path,
                  const nlohmann::json& config_echo) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == Format::Csv) {
    out << to_csv(table);
  } else {
    out << to_json(table, config_echo).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DataTable import_table(const std::filesystem::path& path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (format == Format::Csv) return from_csv(buf.str());
  return from_json(nlohmann::json::parse(buf.str()));
}

}  // namespace saweit
