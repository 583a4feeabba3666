#pragma once

namespace srwec::dynamics {

/// Sliding translator and its tube.
struct BodyParams {
  double mass = 28.0;                 // kg, estimate from the full-scale steel and magnet volumes
  double stroke = 1.0;                // m, total free travel between the stops
  double coulomb_friction = 0.0;      // N
  double endstop_stiffness = 2.0e8;   // N/m, penalty spring beyond +-stroke/2
  double endstop_damping = 1.0e5;     // N s/m, active only while penetrating

  void validate() const;
  double half_stroke() const { return 0.5 * stroke; }
};

}  // namespace srwec::dynamics
