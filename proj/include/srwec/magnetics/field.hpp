#pragma once

#include <vector>

#include "srwec/magnetics/geometry.hpp"

namespace srwec::magnetics {

enum class OuterBoundary {
  Iron,  // infinitely permeable stator yoke at rs
  Open,  // no yoke, field decays to infinity
};

/// Per-harmonic solution of the vector potential. Within each region
///   a(r) = c * I1(m r)/I1(m R_hi) + d * K1(m r)/K1(m R_lo)  (+ magnet particular part)
/// so the coefficients stay O(1) for every harmonic.
struct Harmonic {
  int order = 0;        // odd n
  double m = 0.0;       // n pi / tau_p
  double source = 0.0;  // -mu0 m M_n, T/m
  double c1 = 0.0, d1 = 0.0;  // magnet region, normalized on [r0, rm]
  double c2 = 0.0, d2 = 0.0;  // airgap/winding region, normalized on [rm, rs]
  double condition = 0.0;
};

/// Periodic field of the radially magnetized translator, u measured axially from a pole boundary
/// (B_r ~ sin(m u)). Region I is the magnet layer, region II the airgap plus winding.
class FieldSolution {
 public:
  FieldSolution(GeneratorGeometry geom, MagnetSpec magnet, OuterBoundary boundary,
                std::vector<Harmonic> harmonics);

  const GeneratorGeometry& geometry() const { return geom_; }
  const MagnetSpec& magnet() const { return magnet_; }
  OuterBoundary boundary() const { return boundary_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }

  /// Vector-potential profile a_k(r) and B_z profile g_k(r) = (1/r) d(r a_k)/dr of harmonic k.
  double a(std::size_t k, double r) const;
  double g(std::size_t k, double r) const;

  double br(double r, double u) const;
  double bz(double r, double u) const;

  /// Integral of b_k(r) 2 pi r dr over [r_a, r_b] inside region II (T m^2).
  double radial_flux(std::size_t k, double r_a, double r_b) const;

 private:
  double a_region2(const Harmonic& h, double r) const;
  double g_region2(const Harmonic& h, double r) const;
  double a_region1(const Harmonic& h, double r) const;
  double g_region1(const Harmonic& h, double r) const;

  GeneratorGeometry geom_;
  MagnetSpec magnet_;
  OuterBoundary boundary_;
  std::vector<Harmonic> harmonics_;
};

/// Solves the first `n_harmonics` odd harmonics. Throws ValidationError for an inconsistent
/// geometry and ConditioningError when a harmonic's linear system is ill-conditioned.
FieldSolution solve_field(const GeneratorGeometry& geom, const MagnetSpec& magnet,
                          int n_harmonics = 15, OuterBoundary boundary = OuterBoundary::Iron);

}  // namespace srwec::magnetics
