#include "hetnet/harness/results.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "hetnet/harness/config_io.hpp"

namespace hetnet::harness {
namespace {

bool needs_quotes(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos || (!s.empty() && s.front() == '#');
}

std::string csv_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) {
    return format_number(*d);
  }
  const auto& s = std::get<std::string>(cell);
  if (!needs_quotes(s)) {
    return s;
  }
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') {
      quoted += '"';
    }
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::optional<double> parse_number(const std::string& s) {
  if (s == "nan") {
    return std::nan("");
  }
  if (s == "inf") {
    return INFINITY;
  }
  if (s == "-inf") {
    return -INFINITY;
  }
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    return std::nullopt;
  }
  return v;
}

// Splits one CSV record starting at `pos`; returns cells and whether fields were quoted.
std::vector<std::pair<std::string, bool>> read_record(const std::string& text, std::size_t& pos) {
  std::vector<std::pair<std::string, bool>> fields;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (in_quotes) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          field += '"';
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (in_quotes) {
    throw std::invalid_argument("unterminated quoted CSV field");
  }
  fields.emplace_back(std::move(field), quoted);
  return fields;
}

}  // namespace

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("no column named '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const double* d = std::get_if<double>(&cell)) {
    return *d;
  }
  throw std::invalid_argument("column '" + name + "' holds text");
}

Format parse_format(const std::string& text) {
  if (text == "csv") {
    return Format::Csv;
  }
  if (text == "json") {
    return Format::Json;
  }
  throw ConfigError("format", "must be \"csv\" or \"json\"");
}

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buffer[64];
  // integral values (counts) print without an exponent
  const bool integral = std::trunc(v) == v && std::abs(v) < 1e15;
  auto [ptr, ec] = integral ? std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::fixed)
                            : std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, ptr);
}

std::string to_csv(const ResultTable& table) {
  std::string out;
  for (const auto& line : table.comments) {
    out += "# " + line + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + csv_cell(table.columns[i]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + csv_cell(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string to_json(const ResultTable& table) {
  nlohmann::ordered_json doc;
  doc["comments"] = table.comments;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& cell = row[i];
      if (const double* d = std::get_if<double>(&cell)) {
        // JSON has no nan/inf; write them as null
        record[table.columns[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json();
      } else {
        record[table.columns[i]] = std::get<std::string>(cell);
      }
    }
    rows.push_back(std::move(record));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render(const ResultTable& table, Format format) {
  return format == Format::Csv ? to_csv(table) : to_json(table);
}

ResultTable parse_csv(const std::string& text) {
  ResultTable table;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    const std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos + 1, eol == std::string::npos ? std::string::npos : eol - pos - 1);
    if (!line.empty() && line.front() == ' ') {
      line.erase(0, 1);
    }
    table.comments.push_back(std::move(line));
    pos = eol == std::string::npos ? text.size() : eol + 1;
  }
  if (pos >= text.size()) {
    throw std::invalid_argument("CSV has no header row");
  }
  for (auto& [name, quoted] : read_record(text, pos)) {
    table.columns.push_back(std::move(name));
  }
  while (pos < text.size()) {
    auto fields = read_record(text, pos);
    if (fields.size() != table.columns.size()) {
      throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " cells, expected " +
                                  std::to_string(table.columns.size()));
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& [s, quoted] : fields) {
      auto number = quoted ? std::nullopt : parse_number(s);
      if (number) {
        row.emplace_back(*number);
      } else {
        row.emplace_back(std::move(s));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open '" + tmp.string() + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

}  // namespace hetnet::harness
