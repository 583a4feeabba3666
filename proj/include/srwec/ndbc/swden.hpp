#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace srwec::ndbc {

/// Sentinel NDBC uses for missing spectral bins.
inline constexpr double kMissing = 999.0;

struct Timestamp {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  int minute = 0;

  bool operator==(const Timestamp&) const = default;
};

/// One row of an NDBC spectral wave density ("swden") history file.
struct SpectralRecord {
  Timestamp timestamp;
  std::vector<double> freq;     // Hz
  std::vector<double> density;  // m^2/Hz
  bool missing = false;

  bool operator==(const SpectralRecord&) const = default;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<SpectralRecord> records;
  std::vector<RowError> errors;  // malformed rows, skipped
  bool has_minute_column = true;
};

/// Parses swden text. The header line names the date columns (#YY MM DD hh [mm]) followed by
/// the band frequencies; every following line is one record. Throws FormatError when no
/// usable header is present; bad rows are collected in ParseResult::errors.
ParseResult parse_swden(std::string_view text);

/// Emits records (which must share one grid) in the swden layout accepted by parse_swden.
std::string emit_swden(const std::vector<SpectralRecord>& records);

/// Manual download location for a station's yearly history file; ingestion itself is offline.
std::string history_url(std::string_view station, int year);

}  // namespace srwec::ndbc
