#include "srwec/ndbc/resource_table.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "srwec/error.hpp"

namespace srwec::ndbc {

namespace {

constexpr double kHsWidth = 0.5;
constexpr double kTeWidth = 1.0;

int bin_index(double value, double first_center, double width, std::size_t count) {
  const double lower = first_center - 0.5 * width;
  if (!std::isfinite(value) || value < lower) return -1;
  const auto idx = static_cast<long long>(std::floor((value - lower) / width));
  return idx < static_cast<long long>(count) ? static_cast<int>(idx) : -1;
}

}  // namespace

ResourceBinTable ResourceBinTable::standard_bins() {
  ResourceBinTable t;
  for (int i = 0; i < 20; ++i) t.hs_centers.push_back(0.25 + kHsWidth * i);
  for (int j = 0; j < 11; ++j) t.te_centers.push_back(3.5 + kTeWidth * j);
  t.pct.assign(t.hs_centers.size(), std::vector<double>(t.te_centers.size(), 0.0));
  for (double te : t.te_centers) t.tp_row.push_back(kTpOverTe * te);
  return t;
}

double ResourceBinTable::column_sum(std::size_t te_index) const {
  double s = 0.0;
  for (const auto& row : pct) s += row.at(te_index);
  return s;
}

double ResourceBinTable::total_pct() const {
  double s = out_of_range_pct;
  for (const auto& row : pct) s = std::accumulate(row.begin(), row.end(), s);
  return s;
}

std::pair<int, int> ResourceBinTable::locate(double hs, double te) const {
  const int i = bin_index(hs, hs_centers.front(), kHsWidth, hs_centers.size());
  const int j = bin_index(te, te_centers.front(), kTeWidth, te_centers.size());
  if (i < 0 || j < 0) return {-1, -1};
  return {i, j};
}

ResourceBinTable characterize(const std::vector<SpectralRecord>& records) {
  auto table = ResourceBinTable::standard_bins();
  std::vector<std::vector<std::size_t>> counts(
      table.hs_centers.size(), std::vector<std::size_t>(table.te_centers.size(), 0));
  std::size_t outside = 0;
  std::size_t total = 0;

  for (const auto& rec : records) {
    if (rec.missing) continue;
    ++total;
    const sea::SpectralDensity s{rec.freq, rec.density};
    const double m0 = sea::moment(s, 0);
    if (!(m0 > 0.0)) {
      ++outside;
      continue;
    }
    const double hs = 4.0 * std::sqrt(m0);
    const double te = sea::moment(s, -1) / m0;
    const auto [i, j] = table.locate(hs, te);
    if (i < 0) {
      ++outside;
    } else {
      ++counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  if (total == 0) throw EmptyInputError("no non-missing spectral records to characterize");

  const double scale = 100.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      table.pct[i][j] = static_cast<double>(counts[i][j]) * scale;
    }
  }
  table.out_of_range_pct = static_cast<double>(outside) * scale;
  table.n_records = total;
  return table;
}

Selection select_representative(const ResourceBinTable& table, HsPolicy policy, double gamma) {
  Selection sel;
  if (table.pct.empty() || table.te_centers.empty()) {
    throw EmptyInputError("resource table is empty");
  }
  for (std::size_t j = 0; j < table.te_centers.size(); ++j) {
    const double col = table.column_sum(j);
    if (!(col > 0.0)) {
      sel.warnings.push_back(
          fmt::format("Te = {} s column has no occurrences; skipped", table.te_centers[j]));
      continue;
    }
    double hs = 0.0;
    if (policy == HsPolicy::WeightedMean) {
      for (std::size_t i = 0; i < table.hs_centers.size(); ++i) {
        hs += table.hs_centers[i] * table.pct[i][j];
      }
      hs /= col;
    } else {
      std::size_t best = 0;
      for (std::size_t i = 1; i < table.hs_centers.size(); ++i) {
        if (table.pct[i][j] > table.pct[best][j]) best = i;
      }
      hs = table.hs_centers[best];
    }
    sel.states.push_back({hs, table.tp_row[j], gamma});
  }
  if (sel.states.empty()) throw EmptyInputError("resource table has no occupied Te column");
  return sel;
}

csv::Table resource_csv(const ResourceBinTable& table) {
  std::vector<std::string> header{"hs_m/te_s"};
  for (double te : table.te_centers) header.push_back(csv::num(te));
  csv::Table out(header);
  for (std::size_t i = 0; i < table.hs_centers.size(); ++i) {
    std::vector<std::string> row{csv::num(table.hs_centers[i])};
    for (double p : table.pct[i]) row.push_back(csv::fixed(p, 2));
    out.add_row(std::move(row));
  }
  std::vector<std::string> tp{"tp_s"};
  for (double v : table.tp_row) tp.push_back(csv::fixed(v, 2));
  out.add_row(std::move(tp));
  std::vector<std::string> rest{"out_of_range_pct", csv::fixed(table.out_of_range_pct, 2)};
  rest.resize(header.size());
  out.add_row(std::move(rest));
  return out;
}

ResourceBinTable parse_resource_csv(std::string_view text) {
  ResourceBinTable t;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  bool header = false;
  auto number = [&lineno](const std::string& cell) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      return v;
    } catch (const std::exception&) {
      throw FormatError(fmt::format("line {}: '{}' is not a number", lineno, cell));
    }
  };
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = csv::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    const auto cells = csv::split(line, ',');
    if (!header) {
      if (cells.size() < 2) throw FormatError("resource table header needs Te centers");
      for (std::size_t j = 1; j < cells.size(); ++j) t.te_centers.push_back(number(cells[j]));
      header = true;
      continue;
    }
    if (cells.size() != t.te_centers.size() + 1) {
      throw FormatError(fmt::format("line {}: expected {} cells", lineno, t.te_centers.size() + 1));
    }
    if (cells[0] == "tp_s") {
      for (std::size_t j = 1; j < cells.size(); ++j) t.tp_row.push_back(number(cells[j]));
    } else if (cells[0] == "out_of_range_pct") {
      t.out_of_range_pct = number(cells[1]);
    } else {
      t.hs_centers.push_back(number(cells[0]));
      std::vector<double> row;
      for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(number(cells[j]));
      t.pct.push_back(std::move(row));
    }
  }
  if (!header || t.pct.empty()) throw FormatError("resource table has no data rows");
  if (t.tp_row.empty()) {
    for (double te : t.te_centers) t.tp_row.push_back(kTpOverTe * te);
  }
  return t;
}

ResourceBinTable read_resource_csv(const std::filesystem::path& path) {
  return parse_resource_csv(csv::read_text(path));
}

}  // namespace srwec::ndbc
