#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miner::csv {

// Shortest round-trip decimal form; NaN renders as an empty field.
inline std::string number(double value) {
  if (std::isnan(value)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string number(const std::optional<double>& value) { return value ? number(*value) : std::string{}; }

std::string escape(std::string_view field);
std::string row(const std::vector<std::string>& fields);
std::vector<std::string> parse_line(std::string_view line);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws ParseError when absent.
  std::size_t column(std::string_view name) const;
};

Table read(const std::filesystem::path& path);
void write(const std::filesystem::path& path, const Table& table);

// Parses a numeric field; empty means undefined.
std::optional<double> parse_optional(std::string_view field);
double parse_number(std::string_view field);
long long parse_integer(std::string_view field);

// Writes text to a file, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace miner::csv
