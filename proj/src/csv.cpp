#include "srwec/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "srwec/error.hpp"

namespace srwec::csv {

std::string num(double v, int significant) {
  if (v == 0.0) return "0";  // folds -0 into 0
  return fmt::format("{:.{}g}", v, significant);
}

std::string fixed(double v, int decimals) {
  std::string s = fmt::format("{:.{}f}", v, decimals);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw ValidationError(fmt::format("csv row has {} cells, header has {}", cells.size(),
                                      header_.size()));
  }
  rows_.push_back(std::move(cells));
}

void Table::add_row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(num(v));
  add_row(std::move(cells));
}

std::string Table::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void Table::write(const std::filesystem::path& path) const { write_text(path, str()); }

std::size_t NumericTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw FormatError(fmt::format("missing column '{}'", name));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

NumericTable parse_numeric(std::string_view text) {
  NumericTable t;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    auto cells = split(line, ',');
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) {
        throw FormatError(fmt::format("line {}: expected {} columns, got {}", lineno,
                                      t.header.size(), cells.size()));
      }
      std::vector<double> row;
      row.reserve(cells.size());
      for (const auto& c : cells) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc{} || p != c.data() + c.size()) {
          throw FormatError(fmt::format("line {}: '{}' is not a number", lineno, c));
        }
        row.push_back(v);
      }
      t.rows.push_back(std::move(row));
    }
    if (end == text.size()) break;
  }
  if (t.header.empty()) throw FormatError("csv has no header row");
  return t;
}

NumericTable read_numeric(const std::filesystem::path& path) { return parse_numeric(read_text(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(fmt::format("cannot write '{}'", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace srwec::csv
