#pragma once

#include <cstdint>
#include <vector>

#include "srwec/csv.hpp"
#include "srwec/dynamics/body.hpp"
#include "srwec/dynamics/tilt.hpp"
#include "srwec/dynamics/translator.hpp"
#include "srwec/pto/pto.hpp"
#include "srwec/sea/spectra.hpp"

namespace srwec::dynamics {

struct SimConfig {
  double duration = 660.0;  // s, total episode including warm-up
  double warmup = 60.0;     // s, discarded from averages
  double dt = 1e-3;         // s, RK4 step
  double wave_dt = 0.05;    // s, sampling of the synthesized sea and tilt
  int contact_substeps = 40;
  bool record_series = false;
  std::size_t series_stride = 10;  // steps between recorded samples

  void validate() const;
};

struct SeriesSample {
  double t, theta, x, v, f_pto, p;
};

/// Energy bookkeeping over the whole episode (J).
struct EnergyLedger {
  double generated = 0.0;        // integral of P = -F v (net)
  double gravity_work = 0.0;     // integral of m g sin(theta) v
  double friction_loss = 0.0;
  double endstop_loss = 0.0;
  double delta_mech = 0.0;       // change of kinetic + end-stop spring energy
  double gravity_throughput = 0.0;  // integral of |m g sin(theta) v|

  /// generated + losses + delta_mech - gravity_work, relative to gravity_throughput.
  double relative_residual() const;
};

struct SimResult {
  double avg_power_out = 0.0;  // W, net of motoring, after warm-up
  double avg_power_gen = 0.0;  // W, generating intervals only
  double peak_force = 0.0;     // N
  double peak_power = 0.0;     // W
  std::size_t endstop_impacts = 0;
  double max_abs_x = 0.0;      // m
  EnergyLedger energy;
  std::vector<SeriesSample> series;

  bool operator==(const SimResult& o) const;
};

/// Closed-loop episode driven by a prescribed tilt history.
SimResult simulate(const TiltSeries& tilt, const BodyParams& body, const pto::PtoMode& pto,
                   const SimConfig& cfg, TranslatorState initial = {});

/// Synthesizes the sea (JONSWAP, default grid), the slope and the tilt response, then simulates.
TiltSeries sea_tilt(const sea::SeaState& sea, const TiltParams& tilt, const SimConfig& cfg,
                    std::uint64_t seed);
SimResult simulate(const sea::SeaState& sea, const TiltParams& tilt, const BodyParams& body,
                   const pto::PtoMode& pto, const SimConfig& cfg, std::uint64_t seed);

/// Time-series output: `t_s,theta_rad,x_m,v_mps,f_pto_n,p_w`.
csv::Table series_table(const SimResult& r);

}  // namespace srwec::dynamics
