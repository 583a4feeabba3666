#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srwec/csv.hpp"
#include "srwec/ndbc/swden.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::ndbc {

/// Ratio between the peak period and energy-period bin centers used for the Tp footer row.
inline constexpr double kTpOverTe = 1.16;

/// Occurrence-percentage scatter over (Hs, Te) bins.
struct ResourceBinTable {
  std::vector<double> hs_centers;         // m
  std::vector<double> te_centers;         // s
  std::vector<std::vector<double>> pct;   // [hs][te], percent of non-missing records
  std::vector<double> tp_row;             // s, one per Te column
  double out_of_range_pct = 0.0;          // records outside every bin
  std::size_t n_records = 0;

  /// Empty table with the standard 0.5 m x 1 s bins (Hs 0.25..9.75, Te 3.5..13.5).
  static ResourceBinTable standard_bins();

  double column_sum(std::size_t te_index) const;
  double total_pct() const;  // in-range + out-of-range
  /// Bin indices for (hs, te), or nullopt-like {-1,-1} when outside all bins.
  std::pair<int, int> locate(double hs, double te) const;
};

/// Hs = 4 sqrt(m0), Te = m_-1/m0 per non-missing record, tallied into the standard bins.
ResourceBinTable characterize(const std::vector<SpectralRecord>& records);

enum class HsPolicy { WeightedMean, ModalBin };

struct Selection {
  std::vector<sea::SeaState> states;
  std::vector<std::string> warnings;
};

/// One SeaState per non-empty Te column with tp from the footer row.
Selection select_representative(const ResourceBinTable& table, HsPolicy policy = HsPolicy::WeightedMean,
                                double gamma = 1.0);

csv::Table resource_csv(const ResourceBinTable& table);
ResourceBinTable parse_resource_csv(std::string_view text);
ResourceBinTable read_resource_csv(const std::filesystem::path& path);

}  // namespace srwec::ndbc
