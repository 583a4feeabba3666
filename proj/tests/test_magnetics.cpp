#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "srwec/error.hpp"
#include "srwec/magnetics/machine.hpp"

using namespace srwec;
using namespace srwec::magnetics;

namespace {

double rms_mismatch(const FieldSolution& f, const test::FdOracle& fd, double r) {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < fd.nz(); ++j) {
    const double a = f.br(r, fd.z(j));
    const double d = a - fd.br(r, j);
    num += d * d;
    den += a * a;
  }
  return std::sqrt(num / den);
}

GeneratorGeometry fullscale_with(double backiron, double magnet, double winding) {
  return GeneratorGeometry::from_stack(0.050, backiron, magnet, 0.001, winding, 0.005, 0.300, 8);
}

WindingSpec winding_for(const GeneratorGeometry& g) {
  WindingSpec w = fullscale_winding();
  w.turns_per_coil = turns_for(g.coil_width(), g.winding_t(), w.fill, w.wire_area);
  return w;
}

// Random stacks drawn from the design ranges, kept only when they meet the installation limits.
std::vector<GeneratorGeometry> random_feasible(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bi(0.005, 0.025), mag(0.002, 0.010), wind(0.005, 0.030);
  std::uniform_int_distribution<int> len(2, 6), pole(1, 6);
  std::vector<GeneratorGeometry> out;
  while (static_cast<int>(out.size()) < count) {
    const auto g = GeneratorGeometry::from_stack(0.050, bi(rng), mag(rng), 0.001, wind(rng), 0.005,
                                                 0.050 * len(rng), 2 * pole(rng));
    if (validate_geometry(g).empty()) out.push_back(g);
  }
  return out;
}

}  // namespace

TEST(Geometry, FullScaleDesignIsFeasible) {
  const auto g = fullscale_geometry();
  EXPECT_TRUE(validate_geometry(g).empty());
  EXPECT_NEAR(g.tau_p, 0.0375, 1e-12);
  EXPECT_NEAR(g.rs, 0.085, 1e-12);
  EXPECT_NEAR(g.re, 0.090, 1e-12);
}

TEST(Geometry, ViolationsAreReported) {
  auto g = fullscale_geometry();
  g.yoke_t += 0.020;
  g.re += 0.020;
  const auto v = validate_geometry(g);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "outer radius exceeds 105 mm");

  auto h = fullscale_geometry();
  h.rm = h.ri + 0.001;
  EXPECT_FALSE(consistency_violations(h).empty());
  EXPECT_EQ(consistency_violations(h).front(), "radial ordering r0 < rm < ri < rs < re violated");

  auto s = GeneratorGeometry::from_stack(0.040, 0.025, 0.004, 0.001, 0.005, 0.005, 0.300, 8);
  EXPECT_EQ(validate_geometry(s).front(), "shaft radius below 50 mm");
  EXPECT_TRUE(validate_geometry(s, DesignConstraints::none()).empty());
}

TEST(Field, OracleAgreesOnTheFullScaleDesign) {
  const auto g = fullscale_geometry();
  const auto f = solve_field(g, MagnetSpec::grade("N50"));
  const test::FdOracle fd(g, MagnetSpec::grade("N50"), OuterBoundary::Iron);
  ASSERT_TRUE(fd.ok());
  const double r_mid = 0.5 * (g.ri + g.rs);
  EXPECT_LT(rms_mismatch(f, fd, r_mid), 0.05);
  EXPECT_NEAR(f.harmonics()[0].m * f.a(0, r_mid) / fd.br_fundamental(r_mid), 1.0, 0.05);
}

TEST(Field, OracleAgreesOnRandomFeasibleGeometries) {
  for (const auto& g : random_feasible(5, 31)) {
    const MagnetSpec mag{1.3, 1.05};
    const auto f = solve_field(g, mag);
    const test::FdOracle fd(g, mag, OuterBoundary::Iron);
    ASSERT_TRUE(fd.ok());
    const double r_mid = 0.5 * (g.ri + g.rs);
    EXPECT_LT(rms_mismatch(f, fd, r_mid), 0.05)
        << "tau_p " << g.tau_p << " magnet " << g.magnet_t() << " winding " << g.winding_t();
  }
}

TEST(Field, ZeroRemanenceGivesZeroField) {
  const auto g = fullscale_geometry();
  const auto f = solve_field(g, {0.0, 1.05});
  for (double r : {g.r0, g.rm, g.ri, 0.5 * (g.ri + g.rs), g.rs}) {
    for (double u : {0.0, 0.01, 0.02, 0.05}) {
      EXPECT_EQ(f.br(r, u), 0.0);
      EXPECT_EQ(f.bz(r, u), 0.0);
    }
  }
}

TEST(Field, DivergenceFree) {
  const auto g = fullscale_geometry();
  const auto f = solve_field(g, MagnetSpec::grade("N50"));
  const double h = 1e-6 * g.tau_p;
  double bmax = 0.0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double r = g.rm + (g.rs - g.rm) * (i + 0.5) / 50, u = 2.0 * g.tau_p * j / 50;
      bmax = std::max(bmax, std::hypot(f.br(r, u), f.bz(r, u)));
    }
  }
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double r = g.rm + (g.rs - g.rm) * (i + 0.5) / 50, u = 2.0 * g.tau_p * j / 50;
      const double div = ((r + h) * f.br(r + h, u) - (r - h) * f.br(r - h, u)) / (2 * h * r) +
                         (f.bz(r, u + h) - f.bz(r, u - h)) / (2 * h);
      const double local = std::max(std::hypot(f.br(r, u), f.bz(r, u)), 1e-3 * bmax);
      ASSERT_LT(std::abs(div) * g.tau_p / local, 1e-6) << r << " " << u;
    }
  }
}

TEST(Field, IronWallsCarryNoAxialField) {
  for (const auto& g : {fullscale_geometry(), prototype_geometry()}) {
    const auto f = solve_field(g, {1.0, 1.05});
    for (int j = 0; j < 40; ++j) {
      const double u = 2.0 * g.tau_p * j / 40;
      EXPECT_LT(std::abs(f.bz(g.r0, u)), 1e-6);
      EXPECT_LT(std::abs(f.bz(g.rs, u)), 1e-6);
    }
  }
}

TEST(Field, PeriodicOverOnePolePair) {
  const auto g = fullscale_geometry();
  const auto f = solve_field(g, MagnetSpec::grade("N50"));
  const double r = 0.5 * (g.ri + g.rs);
  for (double u : {0.003, 0.011, 0.027, 0.05}) {
    EXPECT_NEAR(f.br(r, u + 2.0 * g.tau_p), f.br(r, u), 1e-9);
    EXPECT_NEAR(f.br(r, u + g.tau_p), -f.br(r, u), 1e-9);
    EXPECT_NEAR(f.bz(r, u + 2.0 * g.tau_p), f.bz(r, u), 1e-9);
  }
}

TEST(Field, FundamentalDecaysAcrossTheWinding) {
  for (const auto& g : {fullscale_geometry(), prototype_geometry()}) {
    const auto f = solve_field(g, MagnetSpec::grade("N50"));
    double prev = INFINITY;
    for (int i = 0; i <= 40; ++i) {
      const double r = g.ri + (g.rs - g.ri) * i / 40;
      const double b1 = std::abs(f.a(0, r));
      EXPECT_LT(b1, prev) << r;
      prev = b1;
    }
  }
}

TEST(Field, IllConditionedHarmonicIsNamed) {
  // Pole pitch of 10^7 m against centimetre radii: the radial bases become indistinguishable.
  auto g = GeneratorGeometry::from_stack(0.05, 0.025, 0.004, 0.001, 0.005, 0.005, 2e7, 2);
  try {
    solve_field(g, MagnetSpec::grade("N50"), 15);
    FAIL() << "expected a conditioning error";
  } catch (const ConditioningError& e) {
    EXPECT_GE(e.harmonic(), 1);
    EXPECT_NE(std::string(e.what()).find("harmonic"), std::string::npos);
  }
}

TEST(Thrust, FullScaleDesignNearOneKilonewton) {
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50")), fullscale_winding());
  EXPECT_EQ(thrust(m, 0.0), 0.0);
  const double f = thrust(m);
  EXPECT_GT(f, 750.0);
  EXPECT_LT(f, 1250.0);
}

TEST(Thrust, HarmonicTruncationConverges) {
  const auto g = fullscale_geometry();
  const Machine m7(solve_field(g, MagnetSpec::grade("N50"), 7), fullscale_winding());
  const Machine m15(solve_field(g, MagnetSpec::grade("N50"), 15), fullscale_winding());
  EXPECT_NEAR(thrust(m7) / thrust(m15), 1.0, 0.005);
}

TEST(Thrust, NondecreasingInBackIronThickness) {
  double prev = 0.0;
  for (double t = 0.005; t <= 0.0250001; t += 0.0025) {
    const auto g = fullscale_with(t, 0.004, 0.005);
    ASSERT_TRUE(validate_geometry(g).empty());
    const double f = thrust(Machine(solve_field(g, MagnetSpec::grade("N50")), fullscale_winding()));
    EXPECT_GE(f, prev) << t;
    prev = f;
  }
}

TEST(Thrust, WindingThicknessGainsSaturate) {
  std::vector<double> force;
  for (double t = 0.005; t <= 0.0300001; t += 0.005) {
    const auto g = fullscale_with(0.025, 0.004, t);
    force.push_back(thrust(Machine(solve_field(g, MagnetSpec::grade("N50")), winding_for(g))));
  }
  for (std::size_t i = 2; i < force.size(); ++i) {
    EXPECT_GT(force[i], force[i - 1]);
    EXPECT_LT(force[i] - force[i - 1], force[i - 1] - force[i - 2]) << i;
  }
}

TEST(Reciprocity, ThrustPerAmpereIsOneAndAHalfKe) {
  for (const auto& [g, w] : {std::pair{fullscale_geometry(), fullscale_winding()},
                             std::pair{prototype_geometry(), prototype_winding()}}) {
    const Machine m(solve_field(g, MagnetSpec::grade("N50")), w);
    EXPECT_NEAR(thrust(m, 1.0) / (1.5 * ke_amplitude(m)), 1.0, 0.01);
  }
}

TEST(Reciprocity, PowerBalanceForArbitraryCurrents) {
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50")), fullscale_winding());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cur(-5.0, 5.0);
  const double span = m.max_full_overlap() + m.geometry().tau_p;
  std::uniform_real_distribution<double> pos(-span, span);
  for (int n = 0; n < 40; ++n) {
    const double x = pos(rng);
    const Phases i{cur(rng), cur(rng), cur(rng)};
    const auto ke = m.ke(x);
    const double emf_power = ke[0] * i[0] + ke[1] * i[1] + ke[2] * i[2];
    // Force on the translator; the stator takes the reaction, and that reaction times v is the
    // electrical power sum(e i).
    const double reaction = -m.force(x, i);
    EXPECT_NEAR(reaction, emf_power, 0.01 * std::abs(emf_power) + 1e-6) << "x = " << x;
  }
}

TEST(Emf, PeriodicAndPhaseShifted) {
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50")), fullscale_winding());
  const double tau = m.geometry().tau_p, amp = ke_amplitude(m);
  for (double x : {-0.07, -0.04, -0.013, 0.0}) {
    ASSERT_LE(std::max(std::abs(x), std::abs(x + 2.0 * tau)), m.max_full_overlap() + 1e-12);
    const auto a = m.ke(x), b = m.ke(x + 2.0 * tau);
    for (int p = 0; p < 3; ++p) EXPECT_NEAR(a[p], b[p], 1e-3 * amp);
    // Phase B lags A by a third of the electrical period.
    const auto s = m.ke(x + 2.0 * tau / 3.0);
    EXPECT_NEAR(s[1], a[0], 0.02 * amp);
  }
}

TEST(Emf, ZeroWithoutOverlap) {
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50")), fullscale_winding());
  const auto& g = m.geometry();
  const double clear = 0.5 * (g.effective_stator_length() + g.le) + 0.01;
  for (double x : {clear, -clear, 2.0 * clear}) {
    const auto ke = m.ke(x);
    for (double k : ke) EXPECT_EQ(k, 0.0);
  }
}

TEST(Emf, TableRoundTripAndHeader) {
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50"), 7), fullscale_winding());
  const auto t = emf_profile(m, -0.1, 0.1, 0.005);
  EXPECT_EQ(ke_table(t).header(),
            (std::vector<std::string>{"x_m", "ke_a_vspm", "ke_b_vspm", "ke_c_vspm"}));
  const auto direct = m.ke(0.02);
  const auto interp = t(0.02);
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(interp[p], direct[p], 1e-9);
  EXPECT_EQ(t(1.0)[0], 0.0);
}

TEST(Ripple, MatchedSinusoidsGiveNearlyConstantForce) {
  auto w = fullscale_winding();
  w.distribution = Distribution::Sinusoidal;
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50"), 1), w);
  EXPECT_LT(force_ripple(m), 1e-3);
}

TEST(Ripple, PrototypeIsFinite) {
  const Machine m(solve_field(prototype_geometry(), MagnetSpec::grade("N42")), prototype_winding());
  const double r = force_ripple(m);
  EXPECT_TRUE(std::isfinite(r));
  EXPECT_GE(r, 0.0);
}

TEST(Ripple, ZeroCurrentIsUndefined) {
  auto w = fullscale_winding();
  w.j_rms = 0.0;
  const Machine m(solve_field(fullscale_geometry(), MagnetSpec::grade("N50"), 3), w);
  EXPECT_THROW(force_ripple(m), NumericError);
}

TEST(Yoke, SameBoundaryRatioIsOne) {
  const auto g = fullscale_geometry();
  const Machine a(solve_field(g, MagnetSpec::grade("N50"), 15, OuterBoundary::Iron), fullscale_winding());
  const Machine b(solve_field(g, MagnetSpec::grade("N50"), 15, OuterBoundary::Iron), fullscale_winding());
  EXPECT_DOUBLE_EQ(thrust(a) / thrust(b), 1.0);
}

TEST(Yoke, ThickerMagnetsLowerTheSensitivity) {
  // The oracle with and without the outer wall checks the analytical trend on the fundamental.
  std::vector<double> analytic_ratio, fd_ratio, lib_ratio;
  for (double t : {0.003, 0.008}) {
    const auto g = fullscale_with(0.020, t, 0.005);
    const MagnetSpec mag = MagnetSpec::grade("N50");
    const double r = 0.5 * (g.ri + g.rs);
    const auto iron = solve_field(g, mag, 15, OuterBoundary::Iron);
    const auto open = solve_field(g, mag, 15, OuterBoundary::Open);
    analytic_ratio.push_back(open.a(0, r) / iron.a(0, r));
    const test::FdOracle fd_iron(g, mag, OuterBoundary::Iron), fd_open(g, mag, OuterBoundary::Open);
    fd_ratio.push_back(fd_open.br_fundamental(r) / fd_iron.br_fundamental(r));
    lib_ratio.push_back(yoke_sensitivity(g, mag, winding_for(g)));
  }
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(analytic_ratio[k] / fd_ratio[k], 1.0, 0.03);
  EXPECT_GT(fd_ratio[1], fd_ratio[0]);
  EXPECT_GT(analytic_ratio[1], analytic_ratio[0]);
  EXPECT_GT(lib_ratio[1], lib_ratio[0]);
  for (double r : lib_ratio) {
    EXPECT_GT(r, 0.0);
    EXPECT_LT(r, 1.0);
  }
}

TEST(Winding, TurnsForTheTwoDesigns) {
  const double a20 = awg_area(20);
  EXPECT_NEAR(a20 * 1e6, 0.518, 0.001);
  EXPECT_EQ(turns_for(0.0125, 0.005, 0.75, a20), 90);
  const auto p = prototype_geometry();
  EXPECT_EQ(turns_for(p.coil_width(), p.winding_t(), 0.75, a20), 70);
  EXPECT_NEAR(p.winding_t(), 0.00766, 0.0001);
}

TEST(Winding, LinearInThickness) {
  const double a = awg_area(20);
  for (double t : {0.003, 0.005, 0.0077, 0.012}) {
    const int n = turns_for(0.0125, t, 0.75, a), n2 = turns_for(0.0125, 2 * t, 0.75, a);
    EXPECT_GE(n2, 2 * n);
    EXPECT_LE(n2, 2 * n + 1);
  }
}

TEST(Winding, DomainGuards) {
  EXPECT_THROW(turns_for(0.0125, 0.005, 0.0, awg_area(20)), DomainError);
  EXPECT_THROW(turns_for(0.0, 0.005, 0.75, awg_area(20)), DomainError);
  EXPECT_THROW(turns_for(0.0125, -0.005, 0.75, awg_area(20)), DomainError);
  EXPECT_THROW(awg_area(41), DomainError);
}

TEST(Winding, RatedCurrent) {
  // 5 A/mm^2 rms in 0.518 mm^2 copper.
  EXPECT_NEAR(fullscale_winding().rated_peak_current(), std::sqrt(2.0) * 5.0 * 0.5176, 0.01);
}
