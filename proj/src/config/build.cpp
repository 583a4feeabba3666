#include <cmath>

#include <fmt/format.h>

#include "srwec/config.hpp"
#include "srwec/error.hpp"
#include "srwec/ndbc/resource_table.hpp"

#ifndef SRWEC_FIXTURE_DIR
#define SRWEC_FIXTURE_DIR "fixtures"
#endif

namespace srwec::config {

namespace {
constexpr double kMm = 1e-3;

bool flag(const RunConfig& c, std::string_view key) {
  const int v = c.integer(key);
  if (v != 0 && v != 1) throw UsageError(fmt::format("config key '{}' must be 0 or 1", key));
  return v == 1;
}

std::vector<double> mm_list(const RunConfig& c, std::string_view key) {
  auto v = c.list(key);
  for (auto& x : v) x *= kMm;
  return v;
}
}  // namespace

sea::SeaState sea_state(const RunConfig& c) {
  return {c.number("sea.hs_m"), c.number("sea.tp_s"), c.number("sea.gamma")};
}

sea::GridOptions grid_options(const RunConfig& c) {
  const int n = c.integer("sea.grid_points");
  if (n < 2) throw ValidationError("sea grid_points must be >= 2");
  return {static_cast<std::size_t>(n), c.number("sea.f_lo_factor"), c.number("sea.f_hi_factor")};
}

std::uint64_t seed(const RunConfig& c) {
  const int s = c.integer("sea.seed");
  if (s < 0) throw ValidationError("seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

dynamics::TiltParams tilt_params(const RunConfig& c) {
  return {c.number("tilt.natural_period_s"), c.number("tilt.damping_ratio"),
          c.number("tilt.static_gain")};
}

dynamics::BodyParams body_params(const RunConfig& c) {
  dynamics::BodyParams b;
  b.mass = c.number("body.mass_kg");
  b.stroke = c.number("body.stroke_m");
  b.coulomb_friction = c.number("body.coulomb_friction_n");
  b.endstop_stiffness = c.number("body.endstop_stiffness_npm");
  b.endstop_damping = c.number("body.endstop_damping_nspm");
  return b;
}

dynamics::SimConfig sim_config(const RunConfig& c) {
  dynamics::SimConfig s;
  s.duration = c.number("sim.duration_s");
  s.warmup = c.number("sim.warmup_s");
  s.dt = c.number("sim.dt_s");
  s.wave_dt = c.number("sim.wave_dt_s");
  s.contact_substeps = c.integer("sim.contact_substeps");
  const int stride = c.integer("sim.series_stride");
  if (stride < 1) throw ValidationError("sim series_stride must be >= 1");
  s.series_stride = static_cast<std::size_t>(stride);
  s.record_series = flag(c, "output.series");
  return s;
}

pto::Limits limits(const RunConfig& c) {
  return {c.number("pto.f_max_n"), c.number("pto.p_max_w")};
}

pto::PtoMode pto_mode(const RunConfig& c) {
  pto::PtoMode m;
  m.limits = limits(c);
  const auto& kind = c.text("pto.kind");
  if (kind == "passive") {
    m.law = pto::Passive{c.number("pto.c_nspm")};
  } else if (kind == "reactive") {
    m.law = pto::Reactive{c.number("pto.k_npm"), c.number("pto.c_nspm")};
  } else {
    pto::Discrete d;
    d.v_stop = c.number("pto.v_stop_mps");
    d.safety = c.number("pto.safety");
    m.law = d;
  }
  return m;
}

magnetics::GeneratorGeometry geometry(const RunConfig& c) {
  magnetics::GeneratorGeometry g;
  g.shaft_r = c.number("geom.shaft_r_mm") * kMm;
  g.r0 = c.number("geom.r0_mm") * kMm;
  g.rm = c.number("geom.rm_mm") * kMm;
  g.ri = c.number("geom.ri_mm") * kMm;
  g.re = c.number("geom.re_mm") * kMm;
  g.le = c.number("geom.length_mm") * kMm;
  g.poles = c.integer("geom.poles");
  g.stator_length = c.number("geom.stator_length_mm") * kMm;
  if (g.poles < 1) throw ValidationError("geom poles must be even and >= 2");
  g.tau_p = g.le / g.poles;
  g.g = g.ri - g.rm;
  g.backiron_t = g.r0 - g.shaft_r;
  const double rs = c.number("geom.rs_mm") * kMm;
  if (rs > 0.0) {
    g.rs = rs;
  } else {
    const int turns = c.integer("winding.turns");
    if (turns <= 0) {
      throw ValidationError("geom rs_mm = 0 needs a positive winding.turns to back it out");
    }
    g.rs = g.ri + magnetics::thickness_for_turns(turns, g.coil_width(), c.number("winding.fill"),
                                                 magnetics::awg_area(c.integer("winding.awg")));
  }
  g.yoke_t = g.re - g.rs;
  return g;
}

magnetics::DesignConstraints constraints(const RunConfig& c) {
  if (!flag(c, "geom.enforce_limits")) return magnetics::DesignConstraints::none();
  return {c.number("geom.min_shaft_r_mm") * kMm, c.number("geom.max_outer_r_mm") * kMm};
}

magnetics::MagnetSpec magnet(const RunConfig& c) {
  return {c.number("magnet.br_t"), c.number("magnet.mu_r")};
}

magnetics::OuterBoundary boundary(const RunConfig& c) {
  return c.text("magnet.boundary") == "open" ? magnetics::OuterBoundary::Open
                                             : magnetics::OuterBoundary::Iron;
}

int harmonics(const RunConfig& c) { return c.integer("magnet.harmonics"); }

magnetics::WindingSpec winding(const RunConfig& c, const magnetics::GeneratorGeometry& geom) {
  magnetics::WindingSpec w;
  w.wire_area = magnetics::awg_area(c.integer("winding.awg"));
  w.fill = c.number("winding.fill");
  w.j_rms = c.number("winding.j_rms_a_per_mm2") * 1e6;
  w.distribution = c.text("winding.distribution") == "sinusoidal"
                       ? magnetics::Distribution::Sinusoidal
                       : magnetics::Distribution::Coils;
  const int turns = c.integer("winding.turns");
  w.turns_per_coil =
      turns > 0 ? turns : magnetics::turns_for(geom.coil_width(), geom.winding_t(), w.fill, w.wire_area);
  return w;
}

circuit::BenchConfig bench_config(const RunConfig& c) {
  circuit::BenchConfig b;
  b.geometry = geometry(c);
  b.magnet = magnet(c);
  b.winding = winding(c, b.geometry);
  b.circuit.r_phase = c.number("circuit.r_phase_ohm");
  b.circuit.l_phase = c.number("circuit.l_phase_h");
  b.load.r_load = c.number("circuit.r_load_ohm");
  b.mass = c.number("circuit.bench_mass_kg");
  b.coulomb_friction = c.number("circuit.bench_friction_n");
  b.stroke = c.number("circuit.bench_stroke_m");
  b.dt = c.number("circuit.bench_dt_s");
  b.record_dt = c.number("circuit.bench_record_dt_s");
  b.n_harmonics = harmonics(c);
  return b;
}

circuit::BenchTargets bench_targets(const RunConfig& c) {
  return {c.number("circuit.target_voltage_v"), c.number("circuit.target_current_a"),
          c.number("circuit.target_power_w")};
}

sweep::EpisodeConfig episode(const RunConfig& c, int workers) {
  sweep::EpisodeConfig e;
  e.sim = sim_config(c);
  e.sim.duration = c.number("sweep.episode_s");
  e.sim.warmup = c.number("sweep.warmup_s");
  e.sim.record_series = false;
  e.tilt = tilt_params(c);
  e.body = body_params(c);
  e.limits = limits(c);
  e.seeds = c.integer("sweep.seeds");
  e.base_seed = seed(c);
  e.workers = workers;
  return e;
}

sweep::TuneOptions tune_options(const RunConfig& c) {
  sweep::TuneOptions o;
  o.coarse_c = c.integer("sweep.coarse_c");
  o.coarse_k = c.integer("sweep.coarse_k");
  o.refine = c.integer("sweep.refine");
  o.c_lo = c.number("sweep.c_min_nspm");
  o.c_hi = c.number("sweep.c_max_nspm");
  o.k_lo = c.number("sweep.k_min_npm");
  o.k_hi = c.number("sweep.k_max_npm");
  return o;
}

sweep::LimitSweepConfig limit_config(const RunConfig& c, int workers) {
  sweep::LimitSweepConfig l;
  l.episode = episode(c, workers);
  const auto mode = pto_mode(c);
  if (const auto* d = std::get_if<pto::Discrete>(&mode.law)) l.discrete = *d;
  l.knee_threshold = c.number("sweep.knee_threshold");
  l.knee_force_step = c.number("sweep.knee_force_step_n");
  l.knee_power_step = c.number("sweep.knee_power_step_w");
  return l;
}

sweep::GeometryRanges geometry_ranges(const RunConfig& c, int workers) {
  sweep::GeometryRanges r;
  r.magnet_t = mm_list(c, "sweep.magnet_list_mm");
  r.backiron_t = mm_list(c, "sweep.backiron_list_mm");
  r.le = mm_list(c, "sweep.length_list_mm");
  r.winding_t = mm_list(c, "sweep.winding_list_mm");
  r.poles.clear();
  for (double p : c.list("sweep.poles_list")) {
    if (p != std::floor(p)) throw ValidationError("sweep poles_list entries must be integers");
    r.poles.push_back(static_cast<int>(p));
  }
  r.shaft_r = c.number("geom.shaft_r_mm") * kMm;
  r.airgap = c.number("sweep.airgap_mm") * kMm;
  r.yoke_t = c.number("sweep.yoke_mm") * kMm;
  r.magnet = magnet(c);
  r.winding = winding(c, geometry(c));
  r.constraints = constraints(c);
  r.force_target = c.number("sweep.force_target_n");
  r.n_harmonics = harmonics(c);
  r.workers = workers;
  return r;
}

std::vector<sea::SeaState> sweep_seas(const RunConfig& c) {
  const auto tp = c.list("sweep.tp_list_s");
  const auto hs = c.list("sweep.hs_list_m");
  const double gamma = c.number("sea.gamma");
  if (!tp.empty() || !hs.empty()) {
    if (tp.size() != hs.size()) {
      throw ValidationError("sweep tp_list_s and hs_list_m must have the same length");
    }
    std::vector<sea::SeaState> out;
    for (std::size_t i = 0; i < tp.size(); ++i) out.push_back({hs[i], tp[i], gamma});
    return out;
  }
  std::filesystem::path path = c.text("sweep.resource_csv");
  if (path.empty()) path = std::filesystem::path(SRWEC_FIXTURE_DIR) / "table1_reference.csv";
  const auto policy = c.text("sweep.hs_policy") == "modal" ? ndbc::HsPolicy::ModalBin
                                                          : ndbc::HsPolicy::WeightedMean;
  return ndbc::select_representative(ndbc::read_resource_csv(path), policy, gamma).states;
}

std::filesystem::path table2_path(const RunConfig& c) {
  std::filesystem::path path = c.text("sweep.table2_csv");
  if (path.empty()) path = std::filesystem::path(SRWEC_FIXTURE_DIR) / "table2_reference.csv";
  return path;
}

}  // namespace srwec::config
