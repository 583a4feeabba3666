#pragma once

#include <variant>
#include <vector>

#include "srwec/csv.hpp"
#include "srwec/magnetics/machine.hpp"
#include "srwec/pto/pto.hpp"

namespace srwec::circuit {

using magnetics::Phases;

enum class Connection { Series, Parallel };

/// Balanced wye, per-phase values after connection. Mutual inductance is neglected.
struct CircuitParams {
  double r_phase = 33.6;  // ohm
  double l_phase = 0.022; // H
  Connection connection = Connection::Series;

  void validate() const;
};

struct ResistiveLoad {
  double r_load = 33.6;  // ohm per phase
};
/// Currents are imposed by a converter; the step only does the bookkeeping.
struct ControlledCurrent {};

using LoadSpec = std::variant<ResistiveLoad, ControlledCurrent>;

enum class Scheme { Explicit, BackwardEuler };

struct PowerSplit {
  double p_gen = 0.0;       // sum e i
  double p_copper = 0.0;    // sum R i^2
  double p_out = 0.0;       // into the load / converter
  double p_magnetic = 0.0;  // d/dt of sum L i^2 / 2
};

struct CircuitStep {
  Phases currents{};
  PowerSplit power;
};

/// Advances the phase currents over dt with back-EMF e = ke * v. For a controlled-current load
/// `currents` are the commanded values and are returned unchanged. The explicit scheme requires
/// dt <= L / (10 (R + R_load)) and throws StabilityError otherwise.
CircuitStep step_circuit(const CircuitParams& params, const LoadSpec& load, const Phases& ke,
                         double v, const Phases& currents, double dt,
                         Scheme scheme = Scheme::Explicit);

/// Instantaneous power split for given currents (resistive load or converter).
PowerSplit power_split(const CircuitParams& params, const LoadSpec& load, const Phases& ke,
                       double v, const Phases& currents, const Phases& di_dt);

struct CurrentCommand {
  Phases currents{};
  double i_q = 0.0;    // peak-equivalent phase current
  double force = 0.0;  // force actually produced on the translator, N
  bool unrealizable = false;
};

/// Minimum-copper phase currents producing translator force F (force on translator, so a braking
/// command opposes v). The force constant is k_f = sqrt(1.5 sum ke^2), which equals 1.5 times
/// the ke amplitude for a balanced sinusoidal set.
CurrentCommand force_to_current(double force, const Phases& ke, const pto::Limits& limits,
                                double kf_min = 1e-6);

// Bench replication ---------------------------------------------------------

struct BenchConfig {
  magnetics::GeneratorGeometry geometry;
  magnetics::MagnetSpec magnet;
  magnetics::WindingSpec winding;
  CircuitParams circuit;
  ResistiveLoad load;
  double mass = 7.9;             // kg, calibration parameter
  double coulomb_friction = 0.0; // N
  double stroke = 0.6858;        // m
  double dt = 1e-5;              // s
  double record_dt = 1e-4;       // s between recorded samples
  int n_harmonics = 15;

  static BenchConfig prototype();
  void validate() const;
};

struct BenchSample {
  double t, van, ia, p3;
};

struct BenchResult {
  double angle_deg = 0.0;
  double peak_voltage = 0.0;     // V, load line-to-neutral
  double peak_current = 0.0;     // A
  double peak_avg_power = 0.0;   // W, trailing mean over one electrical period
  double travel_time = 0.0;      // s
  double final_speed = 0.0;      // m/s
  double max_vi_ratio_error = 0.0;  // max |v/i - R_load| over samples with |i| > 1 mA
  double copper_fraction = 0.0;  // winding loss / generated energy
  std::vector<BenchSample> series;
};

/// EMF constant over the bench travel, shared by repeated runs.
magnetics::KeTable bench_ke(const BenchConfig& cfg);

/// One gravity-driven slide from rest at -stroke/2 to +stroke/2 at a fixed tilt.
BenchResult replicate_bench(double angle_deg, const BenchConfig& cfg);
BenchResult replicate_bench(double angle_deg, const BenchConfig& cfg, const magnetics::KeTable& ke);

struct BenchTargets {
  double voltage = 0.0;  // peak load line-to-neutral, V
  double current = 0.0;  // peak phase current, A
  double power = 0.0;    // peak trailing-average 3-phase output, W
};

/// Translator mass (kg) that best matches the targets at `angle_deg`, by least squares on the
/// log errors of all three peaks.
double calibrate_mass(double angle_deg, const BenchTargets& targets, const BenchConfig& cfg,
                      const magnetics::KeTable& ke);

/// `t_s,van_v,ia_a,p3_w`
csv::Table bench_table(const BenchResult& r);

}  // namespace srwec::circuit
