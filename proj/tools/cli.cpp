#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "srwec/circuit/circuit.hpp"
#include "srwec/config.hpp"
#include "srwec/csv.hpp"
#include "srwec/dynamics/simulate.hpp"
#include "srwec/error.hpp"
#include "srwec/magnetics/machine.hpp"
#include "srwec/ndbc/resource_table.hpp"
#include "srwec/ndbc/swden.hpp"
#include "srwec/sea/spectra.hpp"
#include "srwec/sweep/sweep.hpp"

#ifndef SRWEC_PRESET_DIR
#define SRWEC_PRESET_DIR "presets"
#endif

namespace srwec::cli {

namespace fs = std::filesystem;
using config::RunConfig;

namespace {

struct Common {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::optional<long long> seed;
  std::optional<int> workers;
  std::vector<std::string> sets;
};

struct Context {
  std::string command;
  RunConfig cfg;
  fs::path out_dir;
  int workers = 1;
  std::ostream* out = nullptr;

  void write(const std::string& name, const csv::Table& t) const { t.write(out_dir / name); }
};

Context make_context(const std::string& command, const Common& c, std::ostream& out) {
  Context ctx;
  ctx.command = command;
  ctx.out = &out;
  if (!c.preset.empty()) {
    const fs::path p = fs::path(SRWEC_PRESET_DIR) / (c.preset + ".ini");
    if (!fs::exists(p)) throw UsageError(fmt::format("unknown preset '{}'", c.preset));
    ctx.cfg = RunConfig::load(p);
  }
  if (!c.config_path.empty()) {
    // Only the keys written in the file override the preset.
    std::string text;
    try {
      text = csv::read_text(c.config_path);
    } catch (const Error&) {
      throw UsageError(fmt::format("cannot read config '{}'", c.config_path));
    }
    ctx.cfg.merge(text);
  }
  for (const auto& s : c.sets) ctx.cfg.set_assignment(s);
  if (c.seed) {
    if (*c.seed < 0) throw UsageError("--seed must be >= 0");
    ctx.cfg.set("sea.seed", std::to_string(*c.seed));
  }
  ctx.workers = c.workers ? *c.workers : sweep::default_workers();
  if (ctx.workers < 1) throw UsageError("--workers must be >= 1");
  ctx.out_dir = c.out_dir.empty() ? fs::path(ctx.cfg.text("output.dir")) : fs::path(c.out_dir);
  if (ctx.out_dir.empty()) throw UsageError("output directory is empty");
  fs::create_directories(ctx.out_dir);
  return ctx;
}

void write_manifest(const Context& ctx) {
  csv::Table t({"command", "config_hash", "seed"});
  t.add_row({ctx.command, ctx.cfg.hash(), std::to_string(config::seed(ctx.cfg))});
  ctx.write("manifest.csv", t);
}

std::string f3(double v) { return fmt::format("{:.3f}", v); }

// Subcommands -------------------------------------------------------------------

void wave_synth(const Context& ctx) {
  const auto state = config::sea_state(ctx.cfg);
  state.validate();
  const auto spec = sea::jonswap(state, config::grid_options(ctx.cfg));
  const auto r = sea::realize(spec, ctx.cfg.number("sea.duration_s"), ctx.cfg.number("sea.dt_s"),
                              config::seed(ctx.cfg));
  ctx.write("spectrum.csv", sea::spectrum_table(spec));
  ctx.write("wave.csv", sea::realization_table(r));
  double mean = 0.0, var = 0.0;
  for (double e : r.elevation) mean += e;
  mean /= static_cast<double>(r.size());
  for (double e : r.elevation) var += (e - mean) * (e - mean);
  var /= static_cast<double>(r.size());
  *ctx.out << fmt::format(
      "wave synth: hs {} m, tp {} s, te {} s, {} samples, record hs {} m -> {}\n", state.hs,
      state.tp, f3(sea::energy_period(spec)), r.size(), f3(4.0 * std::sqrt(var)),
      ctx.out_dir.string());
}

void ndbc_ingest(const Context& ctx, const std::string& input) {
  if (input.empty()) throw UsageError("ndbc ingest needs --input PATH (an NDBC swden file)");
  const auto parsed = ndbc::parse_swden(csv::read_text(input));
  const auto table = ndbc::characterize(parsed.records);
  ctx.write("resource_table.csv", ndbc::resource_csv(table));
  const auto policy = ctx.cfg.text("sweep.hs_policy") == "modal" ? ndbc::HsPolicy::ModalBin
                                                                : ndbc::HsPolicy::WeightedMean;
  const auto sel = ndbc::select_representative(table, policy, ctx.cfg.number("sea.gamma"));
  csv::Table seas({"tp_s", "hs_m", "gamma"});
  for (const auto& s : sel.states) seas.add_row(std::vector<double>{s.tp, s.hs, s.gamma});
  ctx.write("seastates.csv", seas);
  std::size_t missing = 0;
  for (const auto& r : parsed.records) missing += r.missing ? 1 : 0;
  *ctx.out << fmt::format(
      "ndbc ingest: {} records ({} missing, {} malformed rows skipped), {} binned, "
      "{}% outside the bins, {} sea states -> {}\n",
      parsed.records.size(), missing, parsed.errors.size(), table.n_records,
      f3(table.out_of_range_pct), sel.states.size(), ctx.out_dir.string());
}

void simulate(const Context& ctx) {
  const auto body = config::body_params(ctx.cfg);
  const auto mode = config::pto_mode(ctx.cfg);
  const auto sim = config::sim_config(ctx.cfg);
  const auto& tilt_csv = ctx.cfg.text("tilt.input_csv");
  dynamics::SimResult r;
  if (!tilt_csv.empty()) {
    r = dynamics::simulate(dynamics::read_tilt_csv(tilt_csv), body, mode, sim);
  } else {
    r = dynamics::simulate(config::sea_state(ctx.cfg), config::tilt_params(ctx.cfg), body, mode,
                           sim, config::seed(ctx.cfg));
  }
  csv::Table t({"avg_power_w", "avg_power_gen_w", "peak_force_n", "peak_power_w",
                "endstop_impacts", "max_abs_x_m", "energy_residual"});
  t.add_row(std::vector<double>{r.avg_power_out, r.avg_power_gen, r.peak_force, r.peak_power,
                                static_cast<double>(r.endstop_impacts), r.max_abs_x,
                                r.energy.relative_residual()});
  ctx.write("simulation.csv", t);
  if (sim.record_series) ctx.write("series.csv", dynamics::series_table(r));
  *ctx.out << fmt::format(
      "simulate: {} pto, avg power {} W, peak force {} N, {} end-stop impacts -> {}\n",
      mode.kind(), f3(r.avg_power_out), f3(r.peak_force), r.endstop_impacts, ctx.out_dir.string());
}

void sweep_pto(const Context& ctx) {
  const auto state = config::sea_state(ctx.cfg);
  state.validate();
  const auto ep = config::episode(ctx.cfg, ctx.workers);
  const auto opts = config::tune_options(ctx.cfg);
  const auto tilts = sweep::seed_tilts(state, ep);
  const auto passive = sweep::tune_pto(sweep::Family::Passive, tilts, ep, opts);
  const auto reactive = sweep::tune_pto(sweep::Family::Reactive, tilts, ep, opts);
  csv::Table t({"family", "tp_s", "hs_m", "c_nspm", "k_npm", "avg_power_w", "best_coarse_w",
                "evaluations"});
  for (const auto* r : {&passive, &reactive}) {
    t.add_row({r->family == sweep::Family::Passive ? "passive" : "reactive", csv::num(state.tp),
               csv::num(state.hs), csv::num(r->c), csv::num(r->k), csv::num(r->avg_power),
               csv::num(r->best_coarse), std::to_string(r->evaluations)});
  }
  ctx.write("pto_tuning.csv", t);
  *ctx.out << fmt::format(
      "sweep pto: tp {} s, passive c {} N s/m -> {} W, reactive k {} N/m c {} N s/m -> {} W -> {}\n",
      state.tp, csv::num(passive.c, 4), f3(passive.avg_power), csv::num(reactive.k, 4),
      csv::num(reactive.c, 4), f3(reactive.avg_power), ctx.out_dir.string());
}

std::size_t failed_rows(const sweep::SweepTable& t) {
  return static_cast<std::size_t>(
      std::count_if(t.rows.begin(), t.rows.end(), [](const auto& r) { return !r.error.empty(); }));
}

void sweep_limits(const Context& ctx) {
  const auto seas = config::sweep_seas(ctx.cfg);
  const auto lc = config::limit_config(ctx.cfg, ctx.workers);
  const auto f_list = ctx.cfg.list("sweep.f_max_list_n");
  const auto p_list = ctx.cfg.list("sweep.p_max_list_w");
  if (f_list.empty() || p_list.empty()) throw ValidationError("limit sweep needs rating lists");
  const auto by_force = sweep::limit_sweep(seas, f_list, {ctx.cfg.number("sweep.p_fixed_w")}, lc);
  const auto by_power = sweep::limit_sweep(seas, {ctx.cfg.number("sweep.f_fixed_n")}, p_list, lc);
  ctx.write("limits_force.csv", by_force.to_csv());
  ctx.write("limits_power.csv", by_power.to_csv());
  auto knees = sweep::knee_report(by_force, "f_max_n", lc);
  const auto kp = sweep::knee_report(by_power, "p_max_w", lc);
  knees.insert(knees.end(), kp.begin(), kp.end());
  ctx.write("knees.csv", sweep::knee_table(knees));
  *ctx.out << fmt::format("sweep limits: {} sea states, {} + {} cases, {} failed -> {}\n",
                          seas.size(), by_force.rows.size(), by_power.rows.size(),
                          failed_rows(by_force) + failed_rows(by_power), ctx.out_dir.string());
}

void sweep_geometry(const Context& ctx) {
  const auto res = sweep::geometry_sweep(config::geometry_ranges(ctx.cfg, ctx.workers));
  ctx.write("geometry_sweep.csv", res.table.to_csv());
  std::string best = "none meets the force target";
  if (res.best) {
    const auto& row = res.table.rows[*res.best];
    best = fmt::format("best case {}: magnet {} mm, back iron {} mm, length {} mm, {} poles, "
                       "winding {} mm, {} N",
                       row.index, row.params[0], row.params[1], row.params[2], row.params[3],
                       row.params[4], f3(res.table.metric(*res.best, "force_n")));
  }
  *ctx.out << fmt::format("sweep geometry: {} cases, {} feasible, {} -> {}\n",
                          res.table.rows.size(), res.feasible, best, ctx.out_dir.string());
}

void design_generator(const Context& ctx) {
  const auto geom = config::geometry(ctx.cfg);
  const auto violations = magnetics::validate_geometry(geom, config::constraints(ctx.cfg));
  const auto mag = config::magnet(ctx.cfg);
  mag.validate();
  const auto wind = config::winding(ctx.cfg, geom);
  wind.validate();
  const magnetics::Machine machine(
      magnetics::solve_field(geom, mag, config::harmonics(ctx.cfg), config::boundary(ctx.cfg)),
      wind);
  const double i_peak = wind.rated_peak_current();
  const auto profile = magnetics::force_profile(machine, i_peak);
  const double ke = magnetics::ke_amplitude(machine);
  const double ripple = magnetics::force_ripple(machine);
  const double yoke = magnetics::yoke_sensitivity(geom, mag, wind, config::harmonics(ctx.cfg));

  csv::Table t({"case_id", "r0_mm", "rm_mm", "ri_mm", "rs_mm", "re_mm", "length_mm", "poles",
                "turns", "i_peak_a", "force_n", "ke_vspm", "ripple_pct", "yoke_ratio",
                "feasible"});
  t.add_row(std::vector<double>{0.0, geom.r0 * 1e3, geom.rm * 1e3, geom.ri * 1e3, geom.rs * 1e3,
                                geom.re * 1e3, geom.le * 1e3, static_cast<double>(geom.poles),
                                static_cast<double>(wind.turns_per_coil), i_peak, profile.mean, ke,
                                100.0 * ripple, yoke, violations.empty() ? 1.0 : 0.0});
  ctx.write("design.csv", t);
  csv::Table fp({"x_m", "force_n"});
  for (std::size_t k = 0; k < profile.x.size(); ++k) {
    fp.add_row(std::vector<double>{profile.x[k], profile.force[k]});
  }
  ctx.write("force_profile.csv", fp);
  const double half = 0.5 * geom.effective_stator_length();
  ctx.write("ke_profile.csv",
            magnetics::ke_table(magnetics::emf_profile(machine, -half, half, geom.tau_p / 50.0)));
  *ctx.out << fmt::format(
      "design generator: {} turns, {} A peak, force {} N, ke {} V s/m, ripple {}%, "
      "yoke ratio {}, {} -> {}\n",
      wind.turns_per_coil, f3(i_peak), f3(profile.mean), f3(ke), f3(100.0 * ripple), f3(yoke),
      violations.empty() ? "feasible" : "infeasible: " + violations.front(),
      ctx.out_dir.string());
}

void bench_replicate(const Context& ctx, std::optional<double> angle) {
  auto bc = config::bench_config(ctx.cfg);
  bc.validate();
  const auto ke = circuit::bench_ke(bc);
  if (ctx.cfg.integer("circuit.calibrate") != 0) {
    bc.mass = circuit::calibrate_mass(ctx.cfg.number("circuit.calib_angle_deg"),
                                      config::bench_targets(ctx.cfg), bc, ke);
  }
  const double a = angle ? *angle : ctx.cfg.number("circuit.bench_angle_deg");
  const auto r = circuit::replicate_bench(a, bc, ke);
  ctx.write("bench.csv", circuit::bench_table(r));
  csv::Table t({"angle_deg", "mass_kg", "peak_voltage_v", "peak_current_a", "peak_avg_power_w",
                "travel_time_s", "final_speed_mps", "copper_fraction", "max_vi_ratio_error_ohm"});
  t.add_row(std::vector<double>{a, bc.mass, r.peak_voltage, r.peak_current, r.peak_avg_power,
                                r.travel_time, r.final_speed, r.copper_fraction,
                                r.max_vi_ratio_error});
  ctx.write("bench_summary.csv", t);
  *ctx.out << fmt::format(
      "bench replicate: {} deg, mass {} kg, peak V {} V, peak I {} A, peak avg P {} W, "
      "copper fraction {} -> {}\n",
      a, f3(bc.mass), f3(r.peak_voltage), f3(r.peak_current), f3(r.peak_avg_power),
      f3(r.copper_fraction), ctx.out_dir.string());
}

void report_table2(const Context& ctx) {
  const auto seas = config::sweep_seas(ctx.cfg);
  const auto reference = sweep::read_table2(config::table2_path(ctx.cfg));
  const auto mode = config::pto_mode(ctx.cfg);
  pto::Discrete discrete;
  if (const auto* d = std::get_if<pto::Discrete>(&mode.law)) discrete = *d;
  const auto rows = sweep::compare_strategies(seas, config::episode(ctx.cfg, ctx.workers),
                                              discrete, config::tune_options(ctx.cfg));
  const auto table = sweep::comparison_table(rows, reference);
  ctx.write("table2_comparison.csv", table);
  std::size_t dp = 0, dr = 0;
  for (const auto& r : rows) {
    dp += r.discrete >= r.passive ? 1 : 0;
    dr += r.discrete >= r.reactive ? 1 : 0;
  }
  *ctx.out << table.str();
  *ctx.out << fmt::format(
      "report table2: {} sea states, discrete >= passive in {}, discrete >= reactive in {} -> {}\n",
      rows.size(), dp, dr, ctx.out_dir.string());
}

int report_error(std::ostream& err, int code, const std::string& tag, const std::string& msg) {
  err << "error: " << msg << "\n";
  err << "error_code: " << tag << "\n";
  return code;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kUsage;
    case ErrorKind::Validation:
    case ErrorKind::Data: return kData;
    case ErrorKind::Numeric: return kNumeric;
  }
  return kNumeric;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wave-to-wire simulation and generator design toolkit", "srwec"};
  app.require_subcommand(1);
  app.footer("Run `srwec <command> <subcommand> --help` for the configuration keys.");

  Common common;
  std::string input;
  std::optional<double> angle;
  const std::string keys = "Configuration keys (section.key, default, meaning):\n" +
                           config::describe_keys() +
                           "\nConfig files hold [section] headers and `key = value` lines, or JSON.";

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    auto* s = parent->add_subcommand(name, help);
    s->add_option("--config", common.config_path, "configuration file (key-value or JSON)");
    s->add_option("--preset", common.preset, "bundled preset: fullscale | prototype | resource-seastates");
    s->add_option("--out", common.out_dir, "output directory (overrides output.dir)");
    s->add_option("--seed", common.seed, "random seed (overrides sea.seed)");
    s->add_option("--workers", common.workers, "worker threads (default: available cores)");
    s->add_option("--set", common.sets, "section.key=value override, repeatable")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s->footer(keys);
    return s;
  };

  auto* wave = app.add_subcommand("wave", "sea-state synthesis")->require_subcommand(1);
  auto* wave_synth_cmd = leaf(wave, "synth", "JONSWAP spectrum and one random-phase record");
  auto* ndbc = app.add_subcommand("ndbc", "buoy data ingestion")->require_subcommand(1);
  auto* ingest_cmd = leaf(ndbc, "ingest", "bin an NDBC spectral density file into a resource table");
  ingest_cmd->add_option("--input", input, "NDBC swden text file")->required();
  auto* sim_cmd = leaf(&app, "simulate", "one closed-loop episode");
  auto* sw = app.add_subcommand("sweep", "parameter sweeps")->require_subcommand(1);
  auto* limits_cmd = leaf(sw, "limits", "average power over force and power ratings");
  auto* pto_cmd = leaf(sw, "pto", "tune passive and reactive coefficients for one sea state");
  auto* geom_cmd = leaf(sw, "geometry", "generator geometry design space");
  auto* design = app.add_subcommand("design", "generator design")->require_subcommand(1);
  auto* gen_cmd = leaf(design, "generator", "field, thrust, back-EMF and ripple of one design");
  auto* bench = app.add_subcommand("bench", "prototype bench")->require_subcommand(1);
  auto* bench_cmd = leaf(bench, "replicate", "gravity-driven slide into a resistive load");
  bench_cmd->add_option("--angle", angle, "tilt in degrees (overrides circuit.bench_angle_deg)");
  auto* report = app.add_subcommand("report", "reports against bundled reference data")
                     ->require_subcommand(1);
  auto* table2_cmd = leaf(report, "table2", "strategy comparison beside the reference table");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, kUsage, "usage_error", e.what());
  }

  try {
    auto ctx_for = [&](const std::string& name) { return make_context(name, common, out); };
    std::optional<Context> ctx;
    if (wave_synth_cmd->parsed()) {
      ctx = ctx_for("wave synth");
      wave_synth(*ctx);
    } else if (ingest_cmd->parsed()) {
      ctx = ctx_for("ndbc ingest");
      ndbc_ingest(*ctx, input);
    } else if (sim_cmd->parsed()) {
      ctx = ctx_for("simulate");
      simulate(*ctx);
    } else if (limits_cmd->parsed()) {
      ctx = ctx_for("sweep limits");
      sweep_limits(*ctx);
    } else if (pto_cmd->parsed()) {
      ctx = ctx_for("sweep pto");
      sweep_pto(*ctx);
    } else if (geom_cmd->parsed()) {
      ctx = ctx_for("sweep geometry");
      sweep_geometry(*ctx);
    } else if (gen_cmd->parsed()) {
      ctx = ctx_for("design generator");
      design_generator(*ctx);
    } else if (bench_cmd->parsed()) {
      ctx = ctx_for("bench replicate");
      bench_replicate(*ctx, angle);
    } else if (table2_cmd->parsed()) {
      ctx = ctx_for("report table2");
      report_table2(*ctx);
    } else {
      return report_error(err, kUsage, "usage_error", "no command given");
    }
    write_manifest(*ctx);
    return kOk;
  } catch (const Error& e) {
    return report_error(err, exit_for(e.kind()), e.code(), e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error(err, kData, "io_error", e.what());
  } catch (const std::exception& e) {
    return report_error(err, kNumeric, "internal_error", e.what());
  }
}

}  // namespace srwec::cli
