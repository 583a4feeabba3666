#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srwec::csv {

/// Fixed-format number rendering shared by every CSV writer so reruns are byte-identical.
std::string num(double v, int significant = 10);
std::string fixed(double v, int decimals);

/// Small row-oriented CSV builder. Cells are stored pre-formatted.
class Table {
 public:
  explicit Table(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  void add_row(std::vector<std::string> cells);
  void add_row(std::span<const double> values);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Parsed CSV: header + numeric body. Blank lines and '#' comments are skipped.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
};

NumericTable parse_numeric(std::string_view text);
NumericTable read_numeric(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace srwec::csv
