#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "srwec/circuit/circuit.hpp"
#include "srwec/dynamics/simulate.hpp"
#include "srwec/magnetics/field.hpp"
#include "srwec/magnetics/geometry.hpp"
#include "srwec/magnetics/winding.hpp"
#include "srwec/pto/pto.hpp"
#include "srwec/sea/spectra.hpp"
#include "srwec/sweep/sweep.hpp"

namespace srwec::config {

enum class ValueType { Number, Integer, Text, List };

struct KeySpec {
  std::string section;
  std::string key;
  ValueType type;
  std::string default_value;
  std::string help;
  std::vector<std::string> choices = {};  // Text keys only; empty means free text

  std::string dotted() const { return section + "." + key; }
};

/// Every recognized key in emission order.
const std::vector<KeySpec>& schema();
const std::vector<std::string>& sections();

/// Run configuration: a flat key-value map per section. Values are kept in canonical text form,
/// so parse(emit(c)) == c for every config.
class RunConfig {
 public:
  /// All keys at their defaults.
  RunConfig();

  /// Sectioned key-value text, or JSON when the first non-blank character is '{'.
  /// Keys missing from the text keep their defaults. Throws UsageError on unknown keys,
  /// duplicates, malformed lines and ill-typed values.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  /// Overlays the keys present in `text` onto this config.
  void merge(std::string_view text);
  /// `section.key=value` (the --set flag).
  void set_assignment(std::string_view assignment);
  void set(std::string_view dotted, std::string_view value);

  std::string emit() const;
  std::string emit_json() const;
  /// FNV-1a 64 of emit(), as 16 hex digits.
  std::string hash() const;

  double number(std::string_view dotted) const;
  int integer(std::string_view dotted) const;
  const std::string& text(std::string_view dotted) const;
  std::vector<double> list(std::string_view dotted) const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

/// One line per key: `section.key = default  help`.
std::string describe_keys();

// Builders from a RunConfig onto the library types. Domain checks stay with the library types.

sea::SeaState sea_state(const RunConfig& c);
sea::GridOptions grid_options(const RunConfig& c);
std::uint64_t seed(const RunConfig& c);

dynamics::TiltParams tilt_params(const RunConfig& c);
dynamics::BodyParams body_params(const RunConfig& c);
dynamics::SimConfig sim_config(const RunConfig& c);
pto::Limits limits(const RunConfig& c);
pto::PtoMode pto_mode(const RunConfig& c);

magnetics::GeneratorGeometry geometry(const RunConfig& c);
magnetics::DesignConstraints constraints(const RunConfig& c);
magnetics::MagnetSpec magnet(const RunConfig& c);
magnetics::OuterBoundary boundary(const RunConfig& c);
int harmonics(const RunConfig& c);
/// A zero `winding.turns` derives the count from the coil cross-section of `geom`.
magnetics::WindingSpec winding(const RunConfig& c, const magnetics::GeneratorGeometry& geom);

circuit::BenchConfig bench_config(const RunConfig& c);
circuit::BenchTargets bench_targets(const RunConfig& c);

sweep::EpisodeConfig episode(const RunConfig& c, int workers);
sweep::TuneOptions tune_options(const RunConfig& c);
sweep::LimitSweepConfig limit_config(const RunConfig& c, int workers);
sweep::GeometryRanges geometry_ranges(const RunConfig& c, int workers);
/// Sea states from sweep.tp_list_s / sweep.hs_list_m, else from the resource table CSV.
std::vector<sea::SeaState> sweep_seas(const RunConfig& c);
std::filesystem::path table2_path(const RunConfig& c);

}  // namespace srwec::config
