#include "srwec/sweep/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "srwec/error.hpp"
#include "srwec/magnetics/machine.hpp"

namespace srwec::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (axes.empty()) throw ValidationError("sweep grid needs at least one axis");
  for (const auto& a : axes) {
    if (a.values.empty()) throw ValidationError(fmt::format("sweep axis '{}' is empty", a.name));
  }
}

std::size_t GridSpec::case_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return axes.empty() ? 0 : n;
}

std::vector<std::size_t> GridSpec::coords(std::size_t index) const {
  std::vector<std::size_t> c(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    c[k] = index % axes[k].values.size();
    index /= axes[k].values.size();
  }
  return c;
}

std::vector<double> GridSpec::params(std::size_t index) const {
  const auto c = coords(index);
  std::vector<double> p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = axes[k].values[c[k]];
  return p;
}

std::uint64_t case_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(splitmix64(base_seed) ^ index);
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::size_t SweepTable::metric_index(const std::string& name) const {
  for (std::size_t k = 0; k < metric_names.size(); ++k) {
    if (metric_names[k] == name) return k;
  }
  throw ValidationError(fmt::format("no metric '{}' in sweep table", name));
}

double SweepTable::metric(std::size_t row, const std::string& name) const {
  return rows.at(row).metrics.at(metric_index(name));
}

csv::Table SweepTable::to_csv() const {
  std::vector<std::string> header{"case_id"};
  header.insert(header.end(), axis_names.begin(), axis_names.end());
  header.insert(header.end(), metric_names.begin(), metric_names.end());
  header.emplace_back("error");
  csv::Table t(std::move(header));
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.index)};
    for (double p : r.params) cells.push_back(csv::num(p));
    for (double m : r.metrics) cells.push_back(std::isfinite(m) ? csv::num(m) : std::string());
    cells.push_back(r.error);
    t.add_row(std::move(cells));
  }
  return t;
}

SweepTable sweep(const GridSpec& grid, const Evaluator& eval, int workers) {
  grid.validate();
  const std::size_t n = grid.case_count();
  std::vector<Metrics> results(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      CaseContext ctx{i, grid.coords(i), grid.params(i), case_seed(grid.base_seed, i)};
      try {
        results[i] = eval(ctx);
      } catch (const Error& e) {
        errors[i] = e.code();
      } catch (const std::exception&) {
        errors[i] = "error";
      }
    }
  };
  const int nw = std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepTable table;
  table.base_seed = grid.base_seed;
  for (const auto& a : grid.axes) table.axis_names.push_back(a.name);
  for (const auto& m : results) {
    for (const auto& [name, value] : m) {
      if (std::find(table.metric_names.begin(), table.metric_names.end(), name) ==
          table.metric_names.end()) {
        table.metric_names.push_back(name);
      }
    }
  }
  table.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SweepRow row{i, grid.params(i), std::vector<double>(table.metric_names.size(), kNaN),
                 errors[i]};
    for (const auto& [name, value] : results[i]) row.metrics[table.metric_index(name)] = value;
    table.rows.push_back(std::move(row));
  }
  return table;
}

// PTO tuning -----------------------------------------------------------------

EpisodeConfig EpisodeConfig::sweep_default() {
  EpisodeConfig c;
  c.sim.duration = 360.0;
  c.sim.warmup = 60.0;
  return c;
}

void EpisodeConfig::validate() const {
  sim.validate();
  tilt.validate();
  body.validate();
  limits.validate();
  if (seeds < 1) throw ValidationError("sweep seeds must be >= 1");
  if (workers < 1) throw ValidationError("sweep workers must be >= 1");
}

pto::PtoMode TuneResult::mode() const {
  if (family == Family::Passive) return pto::PtoMode{pto::Passive{c}, {}};
  return pto::PtoMode{pto::Reactive{k, c}, {}};
}

std::vector<dynamics::TiltSeries> seed_tilts(const sea::SeaState& sea, const EpisodeConfig& cfg) {
  cfg.validate();
  std::vector<dynamics::TiltSeries> out;
  for (int s = 0; s < cfg.seeds; ++s) {
    out.push_back(dynamics::sea_tilt(sea, cfg.tilt, cfg.sim,
                                     case_seed(cfg.base_seed, static_cast<std::uint64_t>(s))));
  }
  return out;
}

double mean_power(const std::vector<dynamics::TiltSeries>& tilts, const pto::PtoMode& mode,
                  const EpisodeConfig& cfg) {
  if (tilts.empty()) throw ValidationError("mean_power needs at least one tilt history");
  pto::PtoMode m = mode;
  m.limits = cfg.limits;
  double sum = 0.0;
  for (const auto& t : tilts) sum += dynamics::simulate(t, cfg.body, m, cfg.sim).avg_power_out;
  return sum / static_cast<double>(tilts.size());
}

TuneResult tune_pto(Family family, const sea::SeaState& sea, const EpisodeConfig& cfg,
                    const TuneOptions& opts) {
  return tune_pto(family, seed_tilts(sea, cfg), cfg, opts);
}

TuneResult tune_pto(Family family, const std::vector<dynamics::TiltSeries>& tilts,
                    const EpisodeConfig& cfg, const TuneOptions& opts) {
  cfg.validate();
  if (opts.coarse_c < 2 || opts.coarse_k < 1 || opts.refine < 1) {
    throw ValidationError("tuning grid too small");
  }
  const bool reactive = family == Family::Reactive;
  auto evaluate = [&](const std::vector<double>& cs, const std::vector<double>& ks) {
    GridSpec grid;
    grid.axes.push_back({"k_npm", ks});
    grid.axes.push_back({"c_nspm", cs});
    return sweep(
        grid,
        [&](const CaseContext& ctx) -> Metrics {
          const double k = ctx.params[0], c = ctx.params[1];
          const pto::PtoMode mode = reactive ? pto::PtoMode{pto::Reactive{k, c}, {}}
                                             : pto::PtoMode{pto::Passive{c}, {}};
          return {{"avg_power_w", mean_power(tilts, mode, cfg)}};
        },
        cfg.workers);
  };
  // Strictly greater wins, so ties keep the earlier (smaller K, then smaller C) candidate.
  auto best_of = [](const SweepTable& t) {
    std::size_t best = t.rows.size();
    double p = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (!t.rows[i].error.empty()) continue;
      if (t.rows[i].metrics[0] > p) {
        p = t.rows[i].metrics[0];
        best = i;
      }
    }
    if (best == t.rows.size()) throw NumericError("every PTO tuning candidate failed");
    return best;
  };

  const auto cs = log_space(opts.c_lo, opts.c_hi, opts.coarse_c);
  std::vector<double> ks{0.0};
  if (reactive) {
    const auto kl = log_space(opts.k_lo, opts.k_hi, opts.coarse_k - 1);
    ks.insert(ks.end(), kl.begin(), kl.end());
  }
  const SweepTable coarse = evaluate(cs, ks);
  const std::size_t bi = best_of(coarse);
  TuneResult r;
  r.family = family;
  r.k = coarse.rows[bi].params[0];
  r.c = coarse.rows[bi].params[1];
  r.best_coarse = coarse.rows[bi].metrics[0];
  r.avg_power = r.best_coarse;
  r.evaluations = coarse.rows.size();

  auto neighbours = [](const std::vector<double>& v, double x) {
    const auto i = static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
    return std::pair{v[i > 0 ? i - 1 : i], v[i + 1 < v.size() ? i + 1 : i]};
  };
  // `refine` points spanning the neighbours of x, plus x itself.
  auto refined = [&](const std::vector<double>& v, double x) {
    const auto [lo, hi] = neighbours(v, x);
    std::vector<double> out{x};
    if (hi > lo) {
      for (int i = 0; i < opts.refine; ++i) {
        const double t = opts.refine == 1 ? 0.5 : static_cast<double>(i) / (opts.refine - 1);
        out.push_back(lo > 0.0 ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto take = [&](const SweepTable& t) {
    r.evaluations += t.rows.size();
    const std::size_t i = best_of(t);
    if (t.rows[i].metrics[0] > r.avg_power) {
      r.k = t.rows[i].params[0];
      r.c = t.rows[i].params[1];
      r.avg_power = t.rows[i].metrics[0];
    }
  };
  const double c_best = r.c, k_best = r.k;
  take(evaluate(refined(cs, c_best), reactive ? refined(ks, k_best) : std::vector<double>{0.0}));
  if (reactive && k_best != 0.0) {
    // Repeat the passive search inside the K = 0 slice so the reactive result can never fall
    // below the passive one.
    std::size_t i0 = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (coarse.rows[i].error.empty() &&
          (!coarse.rows[i0].error.empty() || coarse.rows[i].metrics[0] > coarse.rows[i0].metrics[0])) {
        i0 = i;
      }
    }
    take(evaluate(refined(cs, cs[i0]), {0.0}));
  }
  return r;
}

// Limit sweeps -----------------------------------------------------------------

SweepTable limit_sweep(const std::vector<sea::SeaState>& seas, const std::vector<double>& f_max,
                       const std::vector<double>& p_max, const LimitSweepConfig& cfg) {
  cfg.episode.validate();
  if (seas.empty()) throw ValidationError("limit sweep needs at least one sea state");
  for (double f : f_max) {
    if (!(f >= 0.0)) throw ValidationError("force ratings must be >= 0");
  }
  for (double p : p_max) {
    if (!(p >= 0.0)) throw ValidationError("power ratings must be >= 0");
  }
  std::vector<std::vector<dynamics::TiltSeries>> tilts;
  for (const auto& s : seas) tilts.push_back(seed_tilts(s, cfg.episode));

  GridSpec grid;
  grid.base_seed = cfg.episode.base_seed;
  std::vector<double> tps;
  for (const auto& s : seas) tps.push_back(s.tp);
  grid.axes = {{"tp_s", tps}, {"f_max_n", f_max}, {"p_max_w", p_max}};
  return sweep(
      grid,
      [&](const CaseContext& ctx) -> Metrics {
        const auto& sea = seas[ctx.coords[0]];
        const double f = ctx.params[1], p = ctx.params[2];
        double power = 0.0;
        if (f > 0.0 && p > 0.0) {
          EpisodeConfig ep = cfg.episode;
          ep.limits = {f, p};
          power = mean_power(tilts[ctx.coords[0]], pto::PtoMode{cfg.discrete, ep.limits}, ep);
        }
        return {{"hs_m", sea.hs}, {"avg_power_w", power}};
      },
      cfg.episode.workers);
}

std::vector<Knee> knee_report(const SweepTable& table, const std::string& axis,
                              const LimitSweepConfig& cfg) {
  const bool force_axis = axis == "f_max_n";
  if (!force_axis && axis != "p_max_w") throw ValidationError("knee axis must be f_max_n or p_max_w");
  const std::size_t ia = force_axis ? 1 : 2, io = force_axis ? 2 : 1;
  const double step = force_axis ? cfg.knee_force_step : cfg.knee_power_step;
  const std::size_t ip = table.metric_index("avg_power_w");

  std::map<std::pair<double, double>, std::vector<std::pair<double, double>>> curves;
  std::vector<std::pair<double, double>> order;
  for (const auto& r : table.rows) {
    const auto key = std::pair{r.params[0], r.params[io]};
    if (!curves.count(key)) order.push_back(key);
    curves[key].emplace_back(r.params[ia], r.metrics[ip]);
  }
  std::vector<Knee> out;
  for (const auto& key : order) {
    auto pts = curves[key];
    std::sort(pts.begin(), pts.end());
    Knee k{key.first, axis, key.second, std::nullopt};
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      const auto [x0, p0] = pts[j];
      const auto [x1, p1] = pts[j + 1];
      if (!(p0 > 0.0) || !(x1 > x0)) continue;
      const double gain = (p1 - p0) / p0 / ((x1 - x0) / step);
      if (gain < cfg.knee_threshold) {
        k.value = x0;
        break;
      }
    }
    out.push_back(k);
  }
  return out;
}

csv::Table knee_table(const std::vector<Knee>& knees) {
  // The fixed and knee ratings carry different units depending on the swept axis.
  csv::Table t({"tp_s", "axis", "fixed_f_max_n", "fixed_p_max_w", "knee_f_max_n", "knee_p_max_w"});
  for (const auto& k : knees) {
    const std::string knee = k.value ? csv::num(*k.value) : "";
    if (k.axis == "f_max_n") {
      t.add_row({csv::num(k.tp), k.axis, "", csv::num(k.other), knee, ""});
    } else {
      t.add_row({csv::num(k.tp), k.axis, csv::num(k.other), "", "", knee});
    }
  }
  return t;
}

// Strategy comparison -------------------------------------------------------------

std::vector<Table2Row> read_table2(const std::filesystem::path& path) {
  const auto t = csv::read_numeric(path);
  const auto tp = t.column("tp_s"), pa = t.column("passive_w"), re = t.column("reactive_w"),
             di = t.column("discrete_w");
  std::vector<Table2Row> out;
  for (const auto& r : t.rows) out.push_back({r[tp], r[pa], r[re], r[di]});
  return out;
}

std::vector<StrategyRow> compare_strategies(const std::vector<sea::SeaState>& seas,
                                            const EpisodeConfig& cfg,
                                            const pto::Discrete& discrete,
                                            const TuneOptions& opts) {
  cfg.validate();
  std::vector<StrategyRow> out;
  for (const auto& sea : seas) {
    const auto tilts = seed_tilts(sea, cfg);
    const auto passive = tune_pto(Family::Passive, tilts, cfg, opts);
    const auto reactive = tune_pto(Family::Reactive, tilts, cfg, opts);
    StrategyRow row;
    row.tp = sea.tp;
    row.hs = sea.hs;
    row.passive = passive.avg_power;
    row.reactive = reactive.avg_power;
    row.discrete = mean_power(tilts, pto::PtoMode{discrete, cfg.limits}, cfg);
    row.c_passive = passive.c;
    row.c_reactive = reactive.c;
    row.k_reactive = reactive.k;
    out.push_back(row);
  }
  return out;
}

csv::Table comparison_table(const std::vector<StrategyRow>& rows,
                            const std::vector<Table2Row>& reference) {
  csv::Table t({"tp_s", "hs_m", "passive_w", "reactive_w", "discrete_w", "c_passive_nspm",
                "c_reactive_nspm", "k_reactive_npm", "ref_passive_w", "ref_reactive_w",
                "ref_discrete_w", "ratio_passive", "ratio_reactive", "ratio_discrete"});
  for (const auto& r : rows) {
    std::vector<std::string> cells{csv::num(r.tp),        csv::num(r.hs),
                                   csv::num(r.passive),   csv::num(r.reactive),
                                   csv::num(r.discrete),  csv::num(r.c_passive),
                                   csv::num(r.c_reactive), csv::num(r.k_reactive)};
    const auto it = std::find_if(reference.begin(), reference.end(),
                                 [&](const Table2Row& p) { return std::abs(p.tp - r.tp) <= 0.05; });
    if (it == reference.end()) {
      cells.insert(cells.end(), 6, "");
    } else {
      for (double v : {it->passive, it->reactive, it->discrete}) cells.push_back(csv::num(v));
      cells.push_back(csv::num(r.passive / it->passive));
      cells.push_back(csv::num(r.reactive / it->reactive));
      cells.push_back(csv::num(r.discrete / it->discrete));
    }
    t.add_row(std::move(cells));
  }
  return t;
}

// Geometry sweep ------------------------------------------------------------------

GeometryRanges GeometryRanges::design_space() {
  GeometryRanges g;
  for (int mm = 2; mm <= 10; ++mm) g.magnet_t.push_back(mm * 1e-3);
  for (int mm = 5; mm <= 25; mm += 5) g.backiron_t.push_back(mm * 1e-3);
  for (int mm = 100; mm <= 300; mm += 50) g.le.push_back(mm * 1e-3);
  for (int p = 2; p <= 12; p += 2) g.poles.push_back(p);
  for (int mm = 5; mm <= 30; mm += 5) g.winding_t.push_back(mm * 1e-3);
  g.magnet = magnetics::MagnetSpec::grade("N50");
  g.winding = magnetics::fullscale_winding();
  return g;
}

GeometryResult geometry_sweep(const GeometryRanges& ranges) {
  ranges.magnet.validate();
  ranges.winding.validate();
  std::vector<double> poles(ranges.poles.begin(), ranges.poles.end());
  GridSpec grid;
  grid.axes = {{"magnet_mm", {}},    {"backiron_mm", {}}, {"length_mm", {}},
               {"poles", poles},     {"winding_mm", {}}};
  for (double v : ranges.magnet_t) grid.axes[0].values.push_back(v * 1e3);
  for (double v : ranges.backiron_t) grid.axes[1].values.push_back(v * 1e3);
  for (double v : ranges.le) grid.axes[2].values.push_back(v * 1e3);
  for (double v : ranges.winding_t) grid.axes[4].values.push_back(v * 1e3);

  GeometryResult out;
  out.table = sweep(
      grid,
      [&](const CaseContext& ctx) -> Metrics {
        const auto& c = ctx.coords;
        const int n_poles = ranges.poles[c[3]];
        const auto geom = magnetics::GeneratorGeometry::from_stack(
            ranges.shaft_r, ranges.backiron_t[c[1]], ranges.magnet_t[c[0]], ranges.airgap,
            ranges.winding_t[c[4]], ranges.yoke_t, ranges.le[c[2]], n_poles);
        const bool feasible = magnetics::validate_geometry(geom, ranges.constraints).empty();
        Metrics m{{"re_mm", geom.re * 1e3},
                  {"magnet_volume_cm3", geom.magnet_volume() * 1e6},
                  {"feasible", feasible ? 1.0 : 0.0}};
        if (!feasible) return m;
        auto winding = ranges.winding;
        winding.turns_per_coil = magnetics::turns_for(geom.coil_width(), geom.winding_t(),
                                                      winding.fill, winding.wire_area);
        m.emplace_back("turns", winding.turns_per_coil);
        if (winding.turns_per_coil == 0) {
          m.insert(m.end(), {{"force_n", 0.0}, {"ke_vspm", 0.0}});
          return m;
        }
        const magnetics::Machine machine(
            magnetics::solve_field(geom, ranges.magnet, ranges.n_harmonics), winding);
        const auto profile = magnetics::force_profile(machine, winding.rated_peak_current(), 48);
        m.emplace_back("force_n", profile.mean);
        m.emplace_back("ke_vspm", magnetics::ke_amplitude(machine, 24));
        m.emplace_back("ripple_pct", profile.ripple * 100.0);
        return m;
      },
      ranges.workers);

  const auto& t = out.table;
  const std::size_t i_feas = t.metric_index("feasible"), i_vol = t.metric_index("magnet_volume_cm3");
  const auto force_col = std::find(t.metric_names.begin(), t.metric_names.end(), "force_n");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (!row.error.empty() || row.metrics[i_feas] != 1.0) continue;
    ++out.feasible;
    if (force_col == t.metric_names.end()) continue;
    const double f = row.metrics[static_cast<std::size_t>(force_col - t.metric_names.begin())];
    if (!(f >= ranges.force_target)) continue;
    if (!out.best) {
      out.best = r;
      continue;
    }
    const auto& b = t.rows[*out.best];
    const double bf = b.metrics[static_cast<std::size_t>(force_col - t.metric_names.begin())];
    const double v = row.metrics[i_vol], bv = b.metrics[i_vol];
    if (v < bv - 1e-9 || (std::abs(v - bv) <= 1e-9 && f > bf)) out.best = r;
  }
  return out;
}

}  // namespace srwec::sweep
