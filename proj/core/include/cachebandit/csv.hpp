#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace cachebandit {

/// Shortest round-trip decimal form; NaN is written as an empty field.
std::string format_double(double value);

/// RFC-4180 row writer: comma separated, CRLF terminated, fields quoted when
/// they contain a comma, quote or line break.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value) { return field(format_double(value)); }
  CsvWriter& field(std::uint64_t value) { return field(std::to_string(value)); }
  CsvWriter& field(std::uint32_t value) { return field(std::to_string(value)); }
  CsvWriter& field(const char* text) { return field(std::string_view(text)); }
  CsvWriter& field(const std::string& text) {
    return field(std::string_view(text));
  }
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);
/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
std::string hex64(std::uint64_t x);

}  // namespace cachebandit
