#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geovec::io {

// RFC 4180 subset: quoted fields with "" escapes, LF or CRLF records, a
// leading UTF-8 BOM is skipped. Blank lines are dropped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

class CsvTable {
 public:
  static CsvTable parse(std::string_view text);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::optional<std::size_t> column(std::string_view name) const;
  // Field of `row` under `column`; empty when the row is short.
  std::string_view field(std::size_t row, std::size_t column) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(std::string_view field);

// Exactly 17 significant digits, the form used by every numeric CSV output.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace geovec::io
