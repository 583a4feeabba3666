#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace srwec::magnetics {

/// Slotless tubular machine cross-section (all lengths in metres).
///
///   shaft | back iron | magnets | airgap | winding | stator yoke
///         shaft_r     r0        rm       ri        rs            re
struct GeneratorGeometry {
  double r0 = 0.0;          // back-iron outer radius
  double rm = 0.0;          // magnet outer radius
  double ri = 0.0;          // coil inner radius
  double rs = 0.0;          // coil outer radius
  double re = 0.0;          // stator outer radius
  double g = 0.0;           // airgap
  double le = 0.0;          // translator length
  int poles = 0;            // translator poles (even)
  double tau_p = 0.0;       // pole pitch
  double shaft_r = 0.0;
  double yoke_t = 0.0;
  double backiron_t = 0.0;
  double stator_length = 0.0;  // 0 selects le + 4 tau_p

  /// Builds a consistent geometry from the stacked thicknesses.
  static GeneratorGeometry from_stack(double shaft_r, double backiron_t, double magnet_t,
                                      double airgap, double winding_t, double yoke_t, double le,
                                      int poles, double stator_length = 0.0);

  double magnet_t() const { return rm - r0; }
  double winding_t() const { return rs - ri; }
  double coil_width() const { return tau_p / 3.0; }
  double effective_stator_length() const;
  double magnet_volume() const;
};

/// Installation limits of the full-scale converter.
struct DesignConstraints {
  double min_shaft_r = 0.050;  // m
  double max_outer_r = 0.105;  // m

  static DesignConstraints none();
};

/// Physical consistency plus installation limits; an empty result means feasible.
std::vector<std::string> validate_geometry(const GeneratorGeometry& geom,
                                           const DesignConstraints& limits = {});

/// Radial ordering and stacking relations only.
std::vector<std::string> consistency_violations(const GeneratorGeometry& geom);

/// Full-scale design.
GeneratorGeometry fullscale_geometry();

/// Bench prototype. The coil outer radius is not published; it is backed out from 70 turns of
/// 20 AWG at 75 % fill in a tau_p/3 wide coil.
GeneratorGeometry prototype_geometry();

struct MagnetSpec {
  double br = 1.40;    // T
  double mu_r = 1.05;

  static MagnetSpec grade(std::string_view name);  // "N50" | "N42"
  void validate() const;
};

}  // namespace srwec::magnetics
