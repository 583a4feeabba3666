#include "srwec/ndbc/swden.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>

#include "srwec/error.hpp"

namespace srwec::ndbc {

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool to_double(std::string_view s, double& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool to_int(std::string_view s, int& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool is_date_label(std::string_view t) {
  if (!t.empty() && t.front() == '#') t.remove_prefix(1);
  return t == "YY" || t == "YYYY" || t == "MM" || t == "DD" || t == "hh" || t == "mm";
}

}  // namespace

ParseResult parse_swden(std::string_view text) {
  ParseResult result;
  std::vector<double> grid;
  std::size_t date_cols = 0;
  bool header_seen = false;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;

    const auto tok = tokens(line);
    if (tok.empty()) continue;

    if (!header_seen) {
      while (date_cols < tok.size() && is_date_label(tok[date_cols])) ++date_cols;
      if (date_cols < 4 || date_cols > 5 || date_cols == tok.size()) {
        throw FormatError(fmt::format("line {}: expected swden header '#YY MM DD hh [mm] <freqs>'",
                                      lineno));
      }
      for (std::size_t i = date_cols; i < tok.size(); ++i) {
        double f = 0.0;
        if (!to_double(tok[i], f) || !(f > 0.0) || (!grid.empty() && !(f > grid.back()))) {
          throw FormatError(fmt::format("line {}: bad header frequency '{}'", lineno, tok[i]));
        }
        grid.push_back(f);
      }
      result.has_minute_column = date_cols == 5;
      header_seen = true;
      continue;
    }
    // NDBC files sometimes carry a second '#yr mo dy hr mn' units line.
    if (tok.front().front() == '#') continue;

    if (tok.size() != date_cols + grid.size()) {
      result.errors.push_back({lineno, fmt::format("expected {} columns, got {}",
                                                   date_cols + grid.size(), tok.size())});
      continue;
    }
    SpectralRecord rec;
    int fields[5] = {0, 0, 0, 0, 0};
    bool ok = true;
    for (std::size_t i = 0; i < date_cols && ok; ++i) ok = to_int(tok[i], fields[i]);
    if (!ok) {
      result.errors.push_back({lineno, "unparseable date fields"});
      continue;
    }
    rec.timestamp = {fields[0] < 100 ? fields[0] + 1900 : fields[0], fields[1], fields[2],
                     fields[3], fields[4]};
    rec.freq = grid;
    rec.density.resize(grid.size());
    for (std::size_t i = 0; i < grid.size() && ok; ++i) {
      ok = to_double(tok[date_cols + i], rec.density[i]) && std::isfinite(rec.density[i]);
      if (ok && rec.density[i] == kMissing) rec.missing = true;
      if (ok && rec.density[i] < 0.0) ok = false;
    }
    if (!ok) {
      result.errors.push_back({lineno, "unparseable or negative density value"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (!header_seen) throw FormatError("swden input has no header line");
  return result;
}

std::string emit_swden(const std::vector<SpectralRecord>& records) {
  if (records.empty()) throw ValidationError("no records to emit");
  const auto& grid = records.front().freq;
  std::string out = "#YY  MM DD hh mm";
  for (double f : grid) out += fmt::format(" {}", f);
  out += '\n';
  for (const auto& r : records) {
    if (r.freq != grid) throw ValidationError("records must share one frequency grid");
    const auto& t = r.timestamp;
    out += fmt::format("{:04d} {:02d} {:02d} {:02d} {:02d}", t.year, t.month, t.day, t.hour,
                       t.minute);
    for (double d : r.density) out += fmt::format(" {}", d);
    out += '\n';
  }
  return out;
}

std::string history_url(std::string_view station, int year) {
  return fmt::format("https://www.ndbc.noaa.gov/view_text_file.php?filename={}w{}.txt.gz&dir=data/"
                     "historical/swden/",
                     station, year);
}

}  // namespace srwec::ndbc
