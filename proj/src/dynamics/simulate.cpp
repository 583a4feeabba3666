#include "srwec/dynamics/simulate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "srwec/error.hpp"

namespace srwec::dynamics {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("sim dt must be > 0");
  if (!(duration > 0.0)) throw ValidationError("sim duration must be > 0");
  if (!(warmup >= 0.0) || !(warmup < duration)) {
    throw ValidationError("sim warmup must be in [0, duration)");
  }
  if (!(wave_dt > 0.0)) throw ValidationError("sim wave_dt must be > 0");
  if (contact_substeps < 1) throw ValidationError("sim contact_substeps must be >= 1");
  if (series_stride < 1) throw ValidationError("sim series_stride must be >= 1");
}

double EnergyLedger::relative_residual() const {
  const double residual = generated + friction_loss + endstop_loss + delta_mech - gravity_work;
  return gravity_throughput > 0.0 ? std::abs(residual) / gravity_throughput : std::abs(residual);
}

bool SimResult::operator==(const SimResult& o) const {
  auto same_series = [](const std::vector<SeriesSample>& a, const std::vector<SeriesSample>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& p, const auto& q) {
      return p.t == q.t && p.theta == q.theta && p.x == q.x && p.v == q.v && p.f_pto == q.f_pto &&
             p.p == q.p;
    });
  };
  return avg_power_out == o.avg_power_out && avg_power_gen == o.avg_power_gen &&
         peak_force == o.peak_force && peak_power == o.peak_power &&
         endstop_impacts == o.endstop_impacts && max_abs_x == o.max_abs_x &&
         energy.generated == o.energy.generated && same_series(series, o.series);
}

namespace {

// x, v, then the accumulated energies: generated, generated (positive part), gravity work,
// friction loss, end-stop loss, |gravity work|.
using State = std::array<double, 8>;
enum : std::size_t { kX, kV, kGen, kGenPos, kGrav, kFric, kEnd, kGravAbs };

double spring_part(double x, const BodyParams& body) {
  const double h = body.half_stroke();
  if (x > h) return body.endstop_stiffness * (x - h);
  if (x < -h) return body.endstop_stiffness * (x + h);
  return 0.0;
}

class Integrator {
 public:
  Integrator(const TiltSeries& tilt, const BodyParams& body, const pto::PtoMode& mode)
      : tilt_(tilt), body_(body), limits_(mode.limits) {}

  // Force law evaluated inside the RK4 stages. The discrete ON flag is frozen over a step.
  double law(const pto::PtoMode& mode, double x, double v) const {
    if (const auto* p = std::get_if<pto::Passive>(&mode.law)) {
      return pto::saturate(-p->c * v, v, limits_);
    }
    if (const auto* r = std::get_if<pto::Reactive>(&mode.law)) {
      return pto::saturate(-r->k * x - r->c * v, v, limits_);
    }
    const auto& d = std::get<pto::Discrete>(mode.law);
    if (!d.on || v == 0.0) return 0.0;
    return -std::copysign(pto::force_cap(limits_, v), v);
  }

  State deriv(double sin_theta, const State& y, const pto::PtoMode& mode) const {
    const double x = y[kX], v = y[kV];
    const double f = law(mode, x, v);
    const double fric = friction_force(v, body_);
    const double fend = endstop_force(x, v, body_);
    const double gravity = body_.mass * sea::kGravity * sin_theta;
    const double p = -f * v;
    State d{};
    d[kX] = v;
    d[kV] = (gravity + f - fric - fend) / body_.mass;
    d[kGen] = p;
    d[kGenPos] = std::max(p, 0.0);
    d[kGrav] = gravity * v;
    d[kFric] = fric * v;
    d[kEnd] = (fend - spring_part(x, body_)) * v;
    d[kGravAbs] = std::abs(gravity * v);
    return d;
  }

  State rk4(double t, const State& y, double h, const pto::PtoMode& mode) const {
    auto axpy = [](const State& a, double s, const State& b) {
      State r;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + s * b[i];
      return r;
    };
    const double s0 = std::sin(tilt_.at(t));
    const double sm = std::sin(tilt_.at(t + 0.5 * h));
    const double s1 = std::sin(tilt_.at(t + h));
    const State k1 = deriv(s0, y, mode);
    const State k2 = deriv(sm, axpy(y, 0.5 * h, k1), mode);
    const State k3 = deriv(sm, axpy(y, 0.5 * h, k2), mode);
    const State k4 = deriv(s1, axpy(y, h, k3), mode);
    State out;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
  }

  // One sub-interval; a discrete ON interval that reverses the velocity is split at the
  // linearly interpolated zero crossing and finished with the generator OFF.
  State advance(double t, const State& y, double h, pto::PtoMode& mode) const {
    State next = rk4(t, y, h, mode);
    auto* d = std::get_if<pto::Discrete>(&mode.law);
    if (d && d->on && y[kV] != 0.0 && next[kV] * y[kV] < 0.0) {
      const double frac = y[kV] / (y[kV] - next[kV]);
      const State mid = rk4(t, y, frac * h, mode);
      d->on = false;
      next = rk4(t + frac * h, mid, (1.0 - frac) * h, mode);
    }
    return next;
  }

  bool near_contact(const State& y, double h) const {
    const double reach = std::abs(y[kX]) + std::abs(y[kV]) * h + 1e-4;
    return reach >= body_.half_stroke();
  }

 private:
  const TiltSeries& tilt_;
  const BodyParams& body_;
  pto::Limits limits_;
};

}  // namespace

SimResult simulate(const TiltSeries& tilt, const BodyParams& body, const pto::PtoMode& pto_mode,
                   const SimConfig& cfg, TranslatorState initial) {
  cfg.validate();
  body.validate();
  pto_mode.validate();
  if (tilt.theta.empty() || tilt.duration() + 1e-9 < cfg.duration) {
    throw ValidationError(fmt::format("tilt series covers {} s, episode needs {} s", tilt.duration(),
                                      cfg.duration));
  }
  if (!std::isfinite(initial.x) || !std::isfinite(initial.v)) {
    throw NumericError("non-finite initial translator state");
  }

  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  const auto warm_steps = static_cast<std::size_t>(std::llround(cfg.warmup / cfg.dt));
  const double h = cfg.dt;
  const Integrator integ(tilt, body, pto_mode);

  SimResult res;
  pto::PtoMode mode = pto_mode;
  State y{};
  y[kX] = initial.x;
  y[kV] = initial.v;
  State warm = y;
  bool in_contact = std::abs(y[kX]) > body.half_stroke();
  const double e_mech0 = 0.5 * body.mass * y[kV] * y[kV] + endstop_energy(y[kX], body);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const double theta = tilt.at(t);
    const auto cmd = pto::pto_force(mode, y[kX], y[kV], theta, body);
    mode = cmd.mode;
    const double p = pto::net_power(cmd.force, y[kV]);
    if (n >= warm_steps) {
      res.peak_force = std::max(res.peak_force, std::abs(cmd.force));
      res.peak_power = std::max(res.peak_power, std::abs(p));
    }
    if (cfg.record_series && n % cfg.series_stride == 0) {
      res.series.push_back({t, theta, y[kX], y[kV], cmd.force, p});
    }
    if (n == warm_steps) warm = y;

    if (integ.near_contact(y, h)) {
      const double hs = h / cfg.contact_substeps;
      for (int k = 0; k < cfg.contact_substeps; ++k) {
        y = integ.advance(t + k * hs, y, hs, mode);
        const bool c = std::abs(y[kX]) > body.half_stroke();
        if (c && !in_contact) ++res.endstop_impacts;
        in_contact = c;
        res.max_abs_x = std::max(res.max_abs_x, std::abs(y[kX]));
      }
    } else {
      y = integ.advance(t, y, h, mode);
      in_contact = std::abs(y[kX]) > body.half_stroke();
      res.max_abs_x = std::max(res.max_abs_x, std::abs(y[kX]));
    }
    if (!std::isfinite(y[kX]) || !std::isfinite(y[kV])) {
      throw NumericError(fmt::format("translator state diverged at t = {} s", t));
    }
  }
  if (warm_steps >= steps) warm = y;

  const double span = static_cast<double>(steps - std::min(warm_steps, steps)) * h;
  res.avg_power_out = (y[kGen] - warm[kGen]) / span;
  res.avg_power_gen = (y[kGenPos] - warm[kGenPos]) / span;
  res.energy.generated = y[kGen];
  res.energy.gravity_work = y[kGrav];
  res.energy.friction_loss = y[kFric];
  res.energy.endstop_loss = y[kEnd];
  res.energy.gravity_throughput = y[kGravAbs];
  res.energy.delta_mech =
      0.5 * body.mass * y[kV] * y[kV] + endstop_energy(y[kX], body) - e_mech0;
  return res;
}

TiltSeries sea_tilt(const sea::SeaState& sea_state, const TiltParams& tilt, const SimConfig& cfg,
                    std::uint64_t seed) {
  cfg.validate();
  const auto spectrum = sea::jonswap(sea_state);
  // One extra wave sample so the tilt covers the final integrator step.
  const auto wave = sea::realize(spectrum, cfg.duration + cfg.wave_dt, cfg.wave_dt, seed);
  return tilt_from_slope(wave.slope, wave.dt, tilt);
}

SimResult simulate(const sea::SeaState& sea_state, const TiltParams& tilt, const BodyParams& body,
                   const pto::PtoMode& pto_mode, const SimConfig& cfg, std::uint64_t seed) {
  return simulate(sea_tilt(sea_state, tilt, cfg, seed), body, pto_mode, cfg);
}

csv::Table series_table(const SimResult& r) {
  csv::Table t({"t_s", "theta_rad", "x_m", "v_mps", "f_pto_n", "p_w"});
  for (const auto& s : r.series) t.add_row(std::vector<double>{s.t, s.theta, s.x, s.v, s.f_pto, s.p});
  return t;
}

}  // namespace srwec::dynamics
