#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace hetnet::harness {

using Cell = std::variant<double, std::string>;

/// Fixed-column table of results; every row has one cell per column.
struct ResultTable {
  std::vector<std::string> comments;  ///< provenance lines, written as '# ...' in CSV
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

enum class Format { Csv, Json };

[[nodiscard]] Format parse_format(const std::string& text);

/// Shortest decimal that round-trips to the same double; nan/inf spelled out.
[[nodiscard]] std::string format_number(double v);

[[nodiscard]] std::string to_csv(const ResultTable& table);
[[nodiscard]] std::string to_json(const ResultTable& table);
[[nodiscard]] std::string render(const ResultTable& table, Format format);

/// Parses CSV produced by to_csv. Numeric-looking cells become doubles.
[[nodiscard]] ResultTable parse_csv(const std::string& text);

/// Writes via a temporary file and rename. Throws IoError.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace hetnet::harness
