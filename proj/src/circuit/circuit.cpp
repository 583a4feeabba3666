#include "srwec/circuit/circuit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "srwec/dynamics/translator.hpp"
#include "srwec/error.hpp"

namespace srwec::circuit {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kG = 9.81;
}  // namespace

void CircuitParams::validate() const {
  if (!(r_phase > 0.0)) throw ValidationError("circuit r_phase must be > 0");
  if (!(l_phase >= 0.0)) throw ValidationError("circuit l_phase must be >= 0");
}

PowerSplit power_split(const CircuitParams& params, const LoadSpec& load, const Phases& ke,
                       double v, const Phases& currents, const Phases& di_dt) {
  PowerSplit p;
  for (std::size_t k = 0; k < 3; ++k) {
    const double i = currents[k];
    p.p_gen += ke[k] * v * i;
    p.p_copper += params.r_phase * i * i;
    p.p_magnetic += params.l_phase * i * di_dt[k];
  }
  if (const auto* r = std::get_if<ResistiveLoad>(&load)) {
    for (double i : currents) p.p_out += r->r_load * i * i;
  } else {
    p.p_out = p.p_gen - p.p_copper - p.p_magnetic;
  }
  return p;
}

CircuitStep step_circuit(const CircuitParams& params, const LoadSpec& load, const Phases& ke,
                         double v, const Phases& currents, double dt, Scheme scheme) {
  params.validate();
  if (!(dt > 0.0)) throw ValidationError("circuit dt must be > 0");
  CircuitStep out;
  const auto* res = std::get_if<ResistiveLoad>(&load);
  if (!res) {
    out.currents = currents;
    out.power = power_split(params, load, ke, v, currents, Phases{});
    return out;
  }
  if (!(res->r_load > 0.0)) throw ValidationError("resistive load must be > 0");
  const double r_total = params.r_phase + res->r_load;
  const double l = params.l_phase;
  if (l > 0.0 && scheme == Scheme::Explicit && dt > l / (10.0 * r_total)) {
    throw StabilityError(fmt::format("circuit dt {} s exceeds L/(10 R) = {} s", dt,
                                     l / (10.0 * r_total)));
  }
  Phases di{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double e = ke[k] * v;
    double next;
    if (l == 0.0) {
      next = e / r_total;
    } else if (scheme == Scheme::Explicit) {
      next = currents[k] + dt * (e - r_total * currents[k]) / l;
    } else {
      next = (currents[k] + dt * e / l) / (1.0 + dt * r_total / l);
    }
    out.currents[k] = next;
    // L di/dt = e - R_total i holds exactly at the new current for either scheme's derivative.
    di[k] = l > 0.0 ? (e - r_total * next) / l : 0.0;
  }
  out.power = power_split(params, load, ke, v, out.currents, di);
  return out;
}

CurrentCommand force_to_current(double force, const Phases& ke, const pto::Limits& limits,
                                double kf_min) {
  CurrentCommand c;
  if (force == 0.0) return c;
  double sq = 0.0;
  for (double k : ke) sq += k * k;
  const double kf = std::sqrt(1.5 * sq);
  if (!(kf > kf_min)) {
    c.unrealizable = true;
    return c;
  }
  const double f = std::clamp(force, -limits.f_max, limits.f_max);
  c.i_q = f / kf;
  // Force on the translator is -sum ke_p i_p.
  const double scale = -c.i_q * std::sqrt(1.5 / sq);
  for (std::size_t p = 0; p < 3; ++p) c.currents[p] = scale * ke[p];
  for (std::size_t p = 0; p < 3; ++p) c.force -= ke[p] * c.currents[p];
  return c;
}

BenchConfig BenchConfig::prototype() {
  BenchConfig c;
  c.geometry = magnetics::prototype_geometry();
  c.magnet = magnetics::MagnetSpec::grade("N42");
  c.winding = magnetics::prototype_winding();
  c.circuit = CircuitParams{33.6, 0.022, Connection::Series};
  c.load = ResistiveLoad{33.6};
  return c;
}

void BenchConfig::validate() const {
  circuit.validate();
  if (!(load.r_load > 0.0)) throw ValidationError("bench load must be > 0");
  if (!(mass > 0.0)) throw ValidationError("bench mass must be > 0");
  if (!(coulomb_friction >= 0.0)) throw ValidationError("bench friction must be >= 0");
  if (!(stroke > 0.0)) throw ValidationError("bench stroke must be > 0");
  if (!(dt > 0.0) || !(record_dt >= dt)) throw ValidationError("bench needs 0 < dt <= record_dt");
}

magnetics::KeTable bench_ke(const BenchConfig& cfg) {
  const magnetics::Machine m(
      magnetics::solve_field(cfg.geometry, cfg.magnet, cfg.n_harmonics), cfg.winding);
  const double half = 0.5 * cfg.stroke + 2.0 * cfg.geometry.tau_p;
  return magnetics::emf_profile(m, -half, half, cfg.geometry.tau_p / 200.0);
}

BenchResult replicate_bench(double angle_deg, const BenchConfig& cfg) {
  return replicate_bench(angle_deg, cfg, bench_ke(cfg));
}

BenchResult replicate_bench(double angle_deg, const BenchConfig& cfg,
                            const magnetics::KeTable& ke_table) {
  cfg.validate();
  if (!(angle_deg >= -90.0 && angle_deg <= 90.0)) {
    throw ValidationError("bench angle must be within [-90, 90] degrees");
  }
  BenchResult out;
  out.angle_deg = angle_deg;
  const double drive = cfg.mass * kG * std::sin(angle_deg * kPi / 180.0);
  if (drive <= cfg.coulomb_friction) return out;  // the translator never leaves the start

  dynamics::BodyParams body;
  body.mass = cfg.mass;
  body.coulomb_friction = cfg.coulomb_friction;
  const double r_load = cfg.load.r_load;
  const double period_travel = 2.0 * cfg.geometry.tau_p;
  const auto record_every =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.record_dt / cfg.dt)));
  const double t_max = 60.0;

  double x = -0.5 * cfg.stroke, v = 0.0, t = 0.0;
  Phases i{};
  double e_gen = 0.0, e_cu = 0.0;
  std::deque<std::pair<double, double>> window;  // (x, p3 dt)
  double window_energy = 0.0, window_time = 0.0;
  std::size_t step = 0;
  while (x < 0.5 * cfg.stroke && t < t_max) {
    const Phases ke = ke_table(x);
    const auto s = step_circuit(cfg.circuit, cfg.load, ke, v, i, cfg.dt);
    i = s.currents;
    double f_em = 0.0;
    for (std::size_t p = 0; p < 3; ++p) f_em -= ke[p] * i[p];
    const double a = (drive + f_em - dynamics::friction_force(v, body)) / cfg.mass;
    v += a * cfg.dt;
    x += v * cfg.dt;
    t += cfg.dt;
    ++step;

    e_gen += s.power.p_gen * cfg.dt;
    e_cu += s.power.p_copper * cfg.dt;
    const double p3 = s.power.p_out;
    window.emplace_back(x, p3 * cfg.dt);
    window_energy += p3 * cfg.dt;
    window_time += cfg.dt;
    while (window.size() > 1 && x - window.front().first > period_travel) {
      window_energy -= window.front().second;
      window_time -= cfg.dt;
      window.pop_front();
    }
    // Only a full electrical period counts as an average.
    if (x - window.front().first >= 0.99 * period_travel) {
      out.peak_avg_power = std::max(out.peak_avg_power, window_energy / window_time);
    }
    const double van = r_load * i[0];
    out.peak_voltage = std::max(out.peak_voltage, std::abs(van));
    out.peak_current = std::max(out.peak_current, std::abs(i[0]));
    if (std::abs(i[0]) > 1e-3) {
      out.max_vi_ratio_error = std::max(out.max_vi_ratio_error, std::abs(van / i[0] - r_load));
    }
    if (step % record_every == 0) out.series.push_back({t, van, i[0], p3});
  }
  out.travel_time = t;
  out.final_speed = v;
  out.copper_fraction = e_gen > 0.0 ? e_cu / e_gen : 0.0;
  return out;
}

double calibrate_mass(double angle_deg, const BenchTargets& targets, const BenchConfig& cfg,
                      const magnetics::KeTable& ke) {
  if (!(targets.voltage > 0.0 && targets.current > 0.0 && targets.power > 0.0)) {
    throw ValidationError("calibration targets must be > 0");
  }
  auto misfit = [&](double log_mass) {
    BenchConfig c = cfg;
    c.mass = std::exp(log_mass);
    c.record_dt = 1e3;  // series not needed
    const auto r = replicate_bench(angle_deg, c, ke);
    if (r.peak_voltage == 0.0) return std::numeric_limits<double>::infinity();
    const double ev = std::log(r.peak_voltage / targets.voltage);
    const double ei = std::log(r.peak_current / targets.current);
    const double ep = std::log(r.peak_avg_power / targets.power);
    return ev * ev + ei * ei + ep * ep;
  };
  // Golden-section search on log mass; the misfit is unimodal because every peak grows with mass.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(0.05), b = std::log(200.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = misfit(c), fd = misfit(d);
  while (b - a > 1e-7) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = misfit(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = misfit(d);
    }
  }
  const double mass = std::exp(0.5 * (a + b));
  if (mass < 0.051 || mass > 199.0) {
    throw NumericError("bench calibration hit the mass search bounds");
  }
  return mass;
}

csv::Table bench_table(const BenchResult& r) {
  csv::Table t({"t_s", "van_v", "ia_a", "p3_w"});
  for (const auto& s : r.series) t.add_row(std::vector<double>{s.t, s.van, s.ia, s.p3});
  return t;
}

}  // namespace srwec::circuit
