#pragma once

#include <array>
#include <vector>

#include "srwec/csv.hpp"
#include "srwec/magnetics/field.hpp"
#include "srwec/magnetics/winding.hpp"

namespace srwec::magnetics {

using Phases = std::array<double, 3>;

/// One stator coil, axial extent in stator coordinates (stator centred on z = 0).
struct Coil {
  double z_lo = 0.0, z_hi = 0.0;
  int phase = 0;     // 0 = A, 1 = B, 2 = C
  int polarity = 1;  // +1 / -1
};

/// Belt sequence A, -C, B, -A, C, -B repeated along the stator, one coil per phase per pole.
std::vector<Coil> stator_coils(const GeneratorGeometry& geom);

/// Field plus winding. x is the translator centre relative to the stator centre; only the part
/// of the winding overlapping the translator sees flux.
class Machine {
 public:
  Machine(FieldSolution field, WindingSpec winding);

  const FieldSolution& field() const { return field_; }
  const GeneratorGeometry& geometry() const { return field_.geometry(); }
  const WindingSpec& winding() const { return winding_; }
  const std::vector<Coil>& coils() const { return coils_; }

  /// Magnet flux linkage of each phase, Wb-turn.
  Phases flux_linkage(double x) const;
  /// EMF constant e_p = ke_p * v, V s/m, from a numerical derivative of the flux linkage.
  Phases ke(double x) const;
  /// Lorentz force on the translator for the given phase currents, N.
  double force(double x, const Phases& currents) const;

  /// Balanced sinusoidal currents of peak `i_peak` with load angle `delta` (rad).
  Phases phase_currents(double x, double i_peak, double delta) const;
  /// Load angle that maximizes average thrust.
  double qaxis_angle() const { return q_angle_; }

  /// Translator travel with full overlap: |x| <= max_full_overlap().
  double max_full_overlap() const;

 private:
  double lambda_phase(int phase, double x) const;
  double lorentz_phase(int phase, double x) const;  // force per ampere of phase current

  FieldSolution field_;
  WindingSpec winding_;
  std::vector<Coil> coils_;
  std::vector<double> flux_;  // per harmonic winding-region flux integrals
  double q_angle_ = 0.0;
};

struct ForceProfile {
  double i_peak = 0.0;
  double mean = 0.0;    // N
  double ripple = 0.0;  // (max - min) / mean
  std::vector<double> x, force;
};

/// Quasi-static q-axis force over one pole pitch of displacement.
ForceProfile force_profile(const Machine& machine, double i_peak, int samples = 192);

/// Average q-axis thrust, N. The second form uses the winding's rated current density.
double thrust(const Machine& machine, double i_peak);
double thrust(const Machine& machine);

/// Peak-to-peak over mean at rated current. Throws NumericError when the mean force vanishes.
double force_ripple(const Machine& machine);

/// Thrust without stator yoke over thrust with it, both at rated current.
double yoke_sensitivity(const GeneratorGeometry& geom, const MagnetSpec& magnet,
                        const WindingSpec& winding, int n_harmonics = 15);

/// Fundamental amplitude of ke over one electrical period at full overlap, V s/m.
double ke_amplitude(const Machine& machine, int samples = 96);

/// Sampled ke(x) with linear interpolation; zero outside the sampled span.
class KeTable {
 public:
  KeTable() = default;
  KeTable(double x0, double dx, std::vector<Phases> values);
  Phases operator()(double x) const;
  double x0() const { return x0_; }
  double dx() const { return dx_; }
  const std::vector<Phases>& values() const { return values_; }

 private:
  double x0_ = 0.0, dx_ = 1.0;
  std::vector<Phases> values_;
};

KeTable emf_profile(const Machine& machine, double x_lo, double x_hi, double dx);

/// `x_m,ke_a_vspm,ke_b_vspm,ke_c_vspm`
csv::Table ke_table(const KeTable& t);

}  // namespace srwec::magnetics
