#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace hr {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Scientific notation with `precision` significant digits; "inf", "-inf", "nan"
/// for non-finite values. Negative zero prints as zero.
std::string format_double(double x, int precision);

std::string to_csv(const Table& table, int precision);
/// Array of row objects; non-finite numbers become null.
std::string to_json(const Table& table, int precision);

/// Writes text atomically enough for our purposes (temp file + rename).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hr
