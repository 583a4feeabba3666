#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srwec/csv.hpp"
#include "srwec/dynamics/simulate.hpp"
#include "srwec/magnetics/geometry.hpp"
#include "srwec/magnetics/winding.hpp"
#include "srwec/pto/pto.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::sweep {

struct Axis {
  std::string name;  // CSV column name, unit-suffixed
  std::vector<double> values;
};

struct GridSpec {
  std::vector<Axis> axes;
  std::uint64_t base_seed = 1;

  void validate() const;
  std::size_t case_count() const;
  /// Per-axis positions of case `index`; the last axis varies fastest.
  std::vector<std::size_t> coords(std::size_t index) const;
  std::vector<double> params(std::size_t index) const;
};

/// Per-case seed derived from the base seed and the case index.
std::uint64_t case_seed(std::uint64_t base_seed, std::uint64_t index);

/// Default worker count: hardware concurrency, at least 1.
int default_workers();

using Metrics = std::vector<std::pair<std::string, double>>;

struct CaseContext {
  std::size_t index = 0;
  std::vector<std::size_t> coords;
  std::vector<double> params;
  std::uint64_t seed = 0;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> params;
  std::vector<double> metrics;  // aligned with SweepTable::metric_names, NaN when absent
  std::string error;            // error code, empty on success
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<std::string> metric_names;
  std::vector<SweepRow> rows;
  std::uint64_t base_seed = 0;

  std::size_t metric_index(const std::string& name) const;
  double metric(std::size_t row, const std::string& name) const;
  /// `case_id,<axes>,<metrics>,error`; non-finite metrics are written as empty cells.
  csv::Table to_csv() const;
};

using Evaluator = std::function<Metrics(const CaseContext&)>;

/// Evaluates every case exactly once on `workers` threads. An exception from the evaluator marks
/// that row with its error code and the sweep continues. Row order never depends on scheduling.
SweepTable sweep(const GridSpec& grid, const Evaluator& eval, int workers = 1);

// PTO tuning -----------------------------------------------------------------

enum class Family { Passive, Reactive };

struct EpisodeConfig {
  dynamics::SimConfig sim;
  dynamics::TiltParams tilt;
  dynamics::BodyParams body;
  pto::Limits limits;
  int seeds = 3;
  std::uint64_t base_seed = 1;
  int workers = 1;

  /// Shorter episodes than a single simulate run: 300 s scored after 60 s warm-up.
  static EpisodeConfig sweep_default();
  void validate() const;
};

struct TuneOptions {
  int coarse_c = 10;        // log-spaced over [c_lo, c_hi]
  int coarse_k = 6;         // 0 plus log-spaced over [k_lo, k_hi]
  int refine = 5;           // points per axis spanning the best coarse cell's neighbours
  double c_lo = 10.0, c_hi = 1e4;
  double k_lo = 10.0, k_hi = 1e4;
};

struct TuneResult {
  Family family = Family::Passive;
  double c = 0.0, k = 0.0;
  double avg_power = 0.0;   // W, mean over seeds
  double best_coarse = 0.0; // W
  std::size_t evaluations = 0;
  pto::PtoMode mode() const;
};

/// Tilt histories for the configured seeds, reused by every candidate of a search.
std::vector<dynamics::TiltSeries> seed_tilts(const sea::SeaState& sea, const EpisodeConfig& cfg);

/// Mean net average power of `mode` over the seeded tilt histories.
double mean_power(const std::vector<dynamics::TiltSeries>& tilts, const pto::PtoMode& mode,
                  const EpisodeConfig& cfg);

/// Coarse log grid then refinement around the best cell; ties go to the earlier candidate.
TuneResult tune_pto(Family family, const sea::SeaState& sea, const EpisodeConfig& cfg,
                    const TuneOptions& opts = {});
TuneResult tune_pto(Family family, const std::vector<dynamics::TiltSeries>& tilts,
                    const EpisodeConfig& cfg, const TuneOptions& opts = {});

// Limit sweeps -----------------------------------------------------------------

struct LimitSweepConfig {
  EpisodeConfig episode = EpisodeConfig::sweep_default();
  pto::Discrete discrete;
  double knee_threshold = 0.02;  // relative gain per knee step
  double knee_force_step = 100.0;  // N
  double knee_power_step = 300.0;  // W
};

/// Rows over (tp_s, hs_m, f_max_n, p_max_w) -> avg_power_w with the discrete PTO.
/// A zero force or power rating yields 0 W without simulation.
SweepTable limit_sweep(const std::vector<sea::SeaState>& seas, const std::vector<double>& f_max,
                       const std::vector<double>& p_max, const LimitSweepConfig& cfg);

struct Knee {
  double tp = 0.0;
  std::string axis;            // "f_max_n" | "p_max_w"
  double other = 0.0;          // the rating held fixed
  std::optional<double> value; // first rating whose next step gains less than the threshold
};

/// Knees along `axis` for every (sea state, other rating) curve of a limit sweep.
std::vector<Knee> knee_report(const SweepTable& table, const std::string& axis,
                              const LimitSweepConfig& cfg);
csv::Table knee_table(const std::vector<Knee>& knees);

// Strategy comparison -------------------------------------------------------------

struct StrategyRow {
  double tp = 0.0, hs = 0.0;
  double passive = 0.0, reactive = 0.0, discrete = 0.0;  // W
  double c_passive = 0.0, c_reactive = 0.0, k_reactive = 0.0;
};

struct Table2Row {
  double tp, passive, reactive, discrete;
};

std::vector<Table2Row> read_table2(const std::filesystem::path& path);

std::vector<StrategyRow> compare_strategies(const std::vector<sea::SeaState>& seas,
                                            const EpisodeConfig& cfg,
                                            const pto::Discrete& discrete = {},
                                            const TuneOptions& opts = {});

/// Side-by-side table; reference rows are matched on Tp within 0.05 s.
csv::Table comparison_table(const std::vector<StrategyRow>& rows,
                            const std::vector<Table2Row>& reference);

// Geometry sweep ------------------------------------------------------------------

struct GeometryRanges {
  std::vector<double> magnet_t, backiron_t, le, winding_t;  // m
  std::vector<int> poles;
  double shaft_r = 0.050, airgap = 0.001, yoke_t = 0.005;    // m
  magnetics::MagnetSpec magnet;
  magnetics::WindingSpec winding;  // turns are recomputed per case
  magnetics::DesignConstraints constraints;
  double force_target = 1000.0;    // N
  int n_harmonics = 15;
  int workers = 1;

  /// Magnet 2-10 mm step 1, back iron 5-25 mm step 5, length 100-300 mm step 50, poles 2-12
  /// even, winding 5-30 mm step 5; shaft fixed at 50 mm.
  static GeometryRanges design_space();
};

struct GeometryResult {
  SweepTable table;
  std::size_t feasible = 0;
  std::optional<std::size_t> best;  // row: force >= target with least magnet volume
};

GeometryResult geometry_sweep(const GeometryRanges& ranges);

}  // namespace srwec::sweep
