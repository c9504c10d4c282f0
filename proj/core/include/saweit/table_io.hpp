#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace saweit {

/// Plot-ready rows: numeric columns first, then text annotations.
struct DataTable {
  std::vector<std::string> numeric_columns;
  std::vector<std::string> text_columns;
  std::vector<std::vector<double>> numeric;  // one vector per row
  std::vector<std::vector<std::string>> text;

  std::size_t rows() const { return numeric.size(); }
  void add_row(std::vector<double> values, std::vector<std::string> labels = {});
  std::size_t column(std::string_view name) const;
};

enum class Format { Csv, Json };

inline constexpr int kSchemaVersion = 1;

Format parse_format(std::string_view name);

/// CSV with a header row; numbers printed with 17 significant digits so they
/// parse back to the identical double.
std::string to_csv(const DataTable& table);
DataTable from_csv(std::string_view text);

/// {"schema_version", "config_echo", "columns", "rows"} envelope.
nlohmann::json to_json(const DataTable& table, const nlohmann::json& config_echo);
DataTable from_json(const nlohmann::json& doc);

void export_table(const DataTable& table, Format format, const std::filesystem::path& path,
                  const nlohmann::json& config_echo = nlohmann::json::object());
DataTable import_table(const std::filesystem::path& path, Format format);

}  // namespace saweit
