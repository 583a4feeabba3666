#include "srwec/config.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

#include "srwec/csv.hpp"
#include "srwec/error.hpp"

namespace srwec::config {

namespace {

using VT = ValueType;

std::vector<KeySpec> build_schema() {
  return {
      {"sea", "hs_m", VT::Number, "1.5", "significant wave height"},
      {"sea", "tp_s", VT::Number, "8.7", "peak period"},
      {"sea", "gamma", VT::Number, "1", "JONSWAP peakedness"},
      {"sea", "grid_points", VT::Integer, "512", "spectral components"},
      {"sea", "f_lo_factor", VT::Number, "0.25", "lowest frequency times tp"},
      {"sea", "f_hi_factor", VT::Number, "6", "highest frequency times tp"},
      {"sea", "duration_s", VT::Number, "3600", "wave synth record length"},
      {"sea", "dt_s", VT::Number, "0.1", "wave synth sample interval"},
      {"sea", "seed", VT::Integer, "1", "random phase seed (also the sweep base seed)"},

      {"tilt", "natural_period_s", VT::Number, "7.5", "tube tilt natural period"},
      {"tilt", "damping_ratio", VT::Number, "0.2", "tube tilt damping ratio"},
      {"tilt", "static_gain", VT::Number, "2", "steady tilt per unit steady slope"},
      {"tilt", "input_csv", VT::Text, "", "external t_s,theta_rad history; replaces the synthesized sea"},

      {"body", "mass_kg", VT::Number, "28", "translator mass"},
      {"body", "stroke_m", VT::Number, "1", "free travel between end stops"},
      {"body", "coulomb_friction_n", VT::Number, "0", "sliding friction"},
      {"body", "endstop_stiffness_npm", VT::Number, "2e+08", "penalty spring"},
      {"body", "endstop_damping_nspm", VT::Number, "100000", "penalty damper"},

      {"sim", "duration_s", VT::Number, "660", "episode length including warm-up"},
      {"sim", "warmup_s", VT::Number, "60", "discarded start of each episode"},
      {"sim", "dt_s", VT::Number, "0.001", "integrator step"},
      {"sim", "wave_dt_s", VT::Number, "0.05", "sea and tilt sampling interval"},
      {"sim", "contact_substeps", VT::Integer, "40", "sub-steps while touching an end stop"},
      {"sim", "series_stride", VT::Integer, "10", "steps between recorded samples"},

      {"pto", "kind", VT::Text, "discrete", "control law", {"passive", "reactive", "discrete"}},
      {"pto", "c_nspm", VT::Number, "500", "damping coefficient"},
      {"pto", "k_npm", VT::Number, "0", "stiffness (reactive only)"},
      {"pto", "f_max_n", VT::Number, "1000", "force rating"},
      {"pto", "p_max_w", VT::Number, "3000", "power rating"},
      {"pto", "v_stop_mps", VT::Number, "0.02", "discrete ON to OFF speed"},
      {"pto", "safety", VT::Number, "1.5", "discrete braking-distance multiplier"},

      {"geom", "shaft_r_mm", VT::Number, "50", "shaft radius"},
      {"geom", "r0_mm", VT::Number, "75", "back-iron outer radius"},
      {"geom", "rm_mm", VT::Number, "79", "magnet outer radius"},
      {"geom", "ri_mm", VT::Number, "80", "coil inner radius"},
      {"geom", "rs_mm", VT::Number, "85", "coil outer radius; 0 backs it out from winding.turns"},
      {"geom", "re_mm", VT::Number, "90", "stator outer radius"},
      {"geom", "length_mm", VT::Number, "300", "translator length"},
      {"geom", "poles", VT::Integer, "8", "translator poles"},
      {"geom", "stator_length_mm", VT::Number, "0", "0 selects length + 4 pole pitches"},
      {"geom", "min_shaft_r_mm", VT::Number, "50", "installation limit"},
      {"geom", "max_outer_r_mm", VT::Number, "105", "installation limit"},
      {"geom", "enforce_limits", VT::Integer, "1", "apply the installation limits (0/1)"},

      {"magnet", "br_t", VT::Number, "1.4", "remanence (N50 1.40, N42 1.30)"},
      {"magnet", "mu_r", VT::Number, "1.05", "recoil permeability"},
      {"magnet", "harmonics", VT::Integer, "15", "odd harmonics in the field solution"},
      {"magnet", "boundary", VT::Text, "iron", "outer boundary of the winding region", {"iron", "open"}},

      {"winding", "turns", VT::Integer, "0", "turns per coil; 0 derives them from the coil area"},
      {"winding", "awg", VT::Integer, "20", "wire gauge"},
      {"winding", "fill", VT::Number, "0.75", "copper fill factor"},
      {"winding", "j_rms_a_per_mm2", VT::Number, "5", "rated rms current density"},
      {"winding", "distribution", VT::Text, "coils", "conductor layout", {"coils", "sinusoidal"}},

      {"circuit", "r_phase_ohm", VT::Number, "33.6", "winding resistance per phase"},
      {"circuit", "l_phase_h", VT::Number, "0.022", "winding inductance per phase"},
      {"circuit", "r_load_ohm", VT::Number, "33.6", "resistive load per phase"},
      {"circuit", "bench_mass_kg", VT::Number, "8.5135", "bench translator mass (calibrated)"},
      {"circuit", "bench_friction_n", VT::Number, "0", "bench sliding friction"},
      {"circuit", "bench_stroke_m", VT::Number, "0.6858", "bench travel"},
      {"circuit", "bench_dt_s", VT::Number, "1e-05", "bench integration step"},
      {"circuit", "bench_record_dt_s", VT::Number, "0.0001", "bench output interval"},
      {"circuit", "bench_angle_deg", VT::Number, "40", "bench tilt when --angle is absent"},
      {"circuit", "calibrate", VT::Integer, "0", "refit bench_mass_kg to the targets first (0/1)"},
      {"circuit", "calib_angle_deg", VT::Number, "40", "tilt of the calibration run"},
      {"circuit", "target_voltage_v", VT::Number, "18.8", "calibration peak load voltage"},
      {"circuit", "target_current_a", VT::Number, "0.57", "calibration peak current"},
      {"circuit", "target_power_w", VT::Number, "16", "calibration peak average power"},

      {"sweep", "seeds", VT::Integer, "3", "seeds averaged per candidate"},
      {"sweep", "episode_s", VT::Number, "360", "episode length including warm-up"},
      {"sweep", "warmup_s", VT::Number, "60", "discarded start of each episode"},
      {"sweep", "coarse_c", VT::Integer, "10", "coarse damping candidates"},
      {"sweep", "coarse_k", VT::Integer, "6", "coarse stiffness candidates"},
      {"sweep", "refine", VT::Integer, "5", "refinement points per axis"},
      {"sweep", "c_min_nspm", VT::Number, "10", "damping search range"},
      {"sweep", "c_max_nspm", VT::Number, "10000", "damping search range"},
      {"sweep", "k_min_npm", VT::Number, "10", "smallest nonzero stiffness"},
      {"sweep", "k_max_npm", VT::Number, "10000", "stiffness search range"},
      {"sweep", "tp_list_s", VT::List, "", "sea-state peak periods; empty uses resource_csv"},
      {"sweep", "hs_list_m", VT::List, "", "significant heights paired with tp_list_s"},
      {"sweep", "resource_csv", VT::Text, "", "resource table; empty uses the bundled one"},
      {"sweep", "hs_policy", VT::Text, "weighted_mean", "Hs per Te column", {"weighted_mean", "modal"}},
      {"sweep", "table2_csv", VT::Text, "", "reference strategy table; empty uses the bundled one"},
      {"sweep", "f_max_list_n", VT::List, "0,250,500,750,1000,1250,1500,2000", "force ratings"},
      {"sweep", "p_max_list_w", VT::List, "0,500,1000,2000,3000,4000,6000", "power ratings"},
      {"sweep", "f_fixed_n", VT::Number, "1000", "force rating held during the power sweep"},
      {"sweep", "p_fixed_w", VT::Number, "3000", "power rating held during the force sweep"},
      {"sweep", "knee_threshold", VT::Number, "0.02", "relative gain per step defining the knee"},
      {"sweep", "knee_force_step_n", VT::Number, "100", "knee step on the force axis"},
      {"sweep", "knee_power_step_w", VT::Number, "300", "knee step on the power axis"},
      {"sweep", "magnet_list_mm", VT::List, "2,3,4,5,6,7,8,9,10", "magnet thicknesses"},
      {"sweep", "backiron_list_mm", VT::List, "5,10,15,20,25", "back-iron thicknesses"},
      {"sweep", "length_list_mm", VT::List, "100,150,200,250,300", "translator lengths"},
      {"sweep", "poles_list", VT::List, "2,4,6,8,10,12", "pole counts"},
      {"sweep", "winding_list_mm", VT::List, "5,10,15,20,25,30", "winding thicknesses"},
      {"sweep", "airgap_mm", VT::Number, "1", "geometry sweep airgap"},
      {"sweep", "yoke_mm", VT::Number, "5", "geometry sweep stator yoke"},
      {"sweep", "force_target_n", VT::Number, "1000", "required thrust"},

      {"output", "dir", VT::Text, "out", "artifact directory (--out overrides)"},
      {"output", "series", VT::Integer, "0", "also write time series (0/1)"},
  };
}

const KeySpec* find_key(std::string_view dotted) {
  for (const auto& k : schema()) {
    if (dotted.size() == k.section.size() + 1 + k.key.size() && dotted.starts_with(k.section) &&
        dotted[k.section.size()] == '.' && dotted.ends_with(k.key)) {
      return &k;
    }
  }
  return nullptr;
}

const KeySpec& require_key(std::string_view dotted) {
  const auto* k = find_key(dotted);
  if (!k) throw UsageError(fmt::format("unknown config key '{}'", dotted));
  return *k;
}

bool parse_double(std::string_view s, double& out) {
  s = csv::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

std::string canonicalize(const KeySpec& k, std::string_view raw) {
  std::string_view v = csv::trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  const auto bad = [&](std::string_view what) {
    return UsageError(fmt::format("config key '{}' expects {}, got '{}'", k.dotted(), what, v));
  };
  switch (k.type) {
    case VT::Number: {
      double d;
      if (!parse_double(v, d)) throw bad("a number");
      return fmt::format("{}", d);
    }
    case VT::Integer: {
      long long i;
      const auto r = std::from_chars(v.data(), v.data() + v.size(), i);
      if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw bad("an integer");
      return fmt::format("{}", i);
    }
    case VT::List: {
      std::string out;
      if (v.empty()) return out;
      for (const auto& item : csv::split(v, ',')) {
        double d;
        if (!parse_double(item, d)) throw bad("a comma-separated number list");
        if (!out.empty()) out += ',';
        out += fmt::format("{}", d);
      }
      return out;
    }
    case VT::Text:
      if (!k.choices.empty()) {
        bool ok = false;
        for (const auto& c : k.choices) ok = ok || c == v;
        if (!ok) throw bad(fmt::format("one of {}", fmt::join(k.choices, "|")));
      }
      return std::string(v);
  }
  return std::string(v);
}

void apply_kv_text(std::map<std::string, std::string>& values, std::string_view text) {
  std::string section;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = csv::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(fmt::format("config line {}: unterminated section", line_no));
      section = std::string(csv::trim(line.substr(1, line.size() - 2)));
      const auto& secs = sections();
      if (std::find(secs.begin(), secs.end(), section) == secs.end()) {
        throw UsageError(fmt::format("config line {}: unknown section '{}'", line_no, section));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(fmt::format("config line {}: expected key = value", line_no));
    }
    const std::string key(csv::trim(line.substr(0, eq)));
    // Dotted keys are allowed anywhere; bare keys need a section header.
    std::string dotted;
    if (key.find('.') != std::string::npos) {
      dotted = key;
    } else if (section.empty()) {
      throw UsageError(fmt::format("config line {}: key '{}' outside any section", line_no, key));
    } else {
      dotted = section + "." + key;
    }
    const auto& spec = require_key(dotted);
    if (!seen.insert(dotted).second) {
      throw UsageError(fmt::format("config line {}: duplicate key '{}'", line_no, dotted));
    }
    values[dotted] = canonicalize(spec, line.substr(eq + 1));
  }
}

void apply_json(std::map<std::string, std::string>& values, std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(fmt::format("config JSON: {}", e.what()));
  }
  if (!j.is_object()) throw UsageError("config JSON must be an object of sections");
  for (const auto& [sec, body] : j.items()) {
    if (!body.is_object()) throw UsageError(fmt::format("config JSON section '{}' must be an object", sec));
    for (const auto& [key, val] : body.items()) {
      const auto& spec = require_key(sec + "." + key);
      std::string raw;
      if (val.is_string()) {
        raw = val.get<std::string>();
      } else if (val.is_number()) {
        raw = fmt::format("{}", val.get<double>());
        if (val.is_number_integer()) raw = fmt::format("{}", val.get<long long>());
      } else if (val.is_array() && spec.type == VT::List) {
        std::vector<std::string> items;
        for (const auto& x : val) {
          if (!x.is_number()) throw UsageError(fmt::format("config key '{}' list must be numeric", spec.dotted()));
          items.push_back(fmt::format("{}", x.get<double>()));
        }
        raw = fmt::format("{}", fmt::join(items, ","));
      } else {
        throw UsageError(fmt::format("config key '{}' has an unsupported JSON type", spec.dotted()));
      }
      values[spec.dotted()] = canonicalize(spec, raw);
    }
  }
}

bool looks_like_json(std::string_view text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string_view::npos && text[p] == '{';
}

}  // namespace

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> s = build_schema();
  return s;
}

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s = [] {
    std::vector<std::string> out;
    for (const auto& k : schema()) {
      if (out.empty() || out.back() != k.section) out.push_back(k.section);
    }
    return out;
  }();
  return s;
}

RunConfig::RunConfig() {
  for (const auto& k : schema()) values_[k.dotted()] = canonicalize(k, k.default_value);
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  c.merge(text);
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = csv::read_text(path);
  } catch (const Error&) {
    throw UsageError(fmt::format("cannot read config '{}'", path.string()));
  }
  return parse(text);
}

void RunConfig::merge(std::string_view text) {
  auto next = values_;
  if (looks_like_json(text)) {
    apply_json(next, text);
  } else {
    apply_kv_text(next, text);
  }
  values_ = std::move(next);
}

void RunConfig::set_assignment(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw UsageError(fmt::format("--set expects section.key=value, got '{}'", assignment));
  }
  set(csv::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void RunConfig::set(std::string_view dotted, std::string_view value) {
  const auto& k = require_key(dotted);
  values_[k.dotted()] = canonicalize(k, value);
}

std::string RunConfig::emit() const {
  std::string out;
  std::string section;
  for (const auto& k : schema()) {
    if (k.section != section) {
      if (!section.empty()) out += '\n';
      section = k.section;
      out += fmt::format("[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", k.key, values_.at(k.dotted()));
  }
  return out;
}

std::string RunConfig::emit_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& k : schema()) {
    const auto& v = values_.at(k.dotted());
    auto& slot = j[k.section][k.key];
    switch (k.type) {
      case VT::Number: slot = std::stod(v); break;
      case VT::Integer: slot = std::stoll(v); break;
      case VT::Text: slot = v; break;
      case VT::List: slot = list(k.dotted()); break;
    }
  }
  return j.dump(2) + "\n";
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : emit()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

double RunConfig::number(std::string_view dotted) const {
  const auto& k = require_key(dotted);
  if (k.type != VT::Number && k.type != VT::Integer) {
    throw UsageError(fmt::format("config key '{}' is not numeric", dotted));
  }
  return std::stod(values_.at(k.dotted()));
}

int RunConfig::integer(std::string_view dotted) const {
  const auto& k = require_key(dotted);
  if (k.type != VT::Integer) throw UsageError(fmt::format("config key '{}' is not an integer", dotted));
  return static_cast<int>(std::stoll(values_.at(k.dotted())));
}

const std::string& RunConfig::text(std::string_view dotted) const {
  const auto& k = require_key(dotted);
  if (k.type != VT::Text) throw UsageError(fmt::format("config key '{}' is not text", dotted));
  return values_.at(k.dotted());
}

std::vector<double> RunConfig::list(std::string_view dotted) const {
  const auto& k = require_key(dotted);
  if (k.type != VT::List) throw UsageError(fmt::format("config key '{}' is not a list", dotted));
  std::vector<double> out;
  const auto& v = values_.at(k.dotted());
  if (v.empty()) return out;
  for (const auto& item : csv::split(v, ',')) out.push_back(std::stod(item));
  return out;
}

std::string describe_keys() {
  std::string out;
  for (const auto& k : schema()) {
    std::string def = k.default_value.empty() ? "\"\"" : k.default_value;
    if (!k.choices.empty()) def += fmt::format(" ({})", fmt::join(k.choices, "|"));
    out += fmt::format("  {:<28} {:<24} {}\n", k.dotted(), def, k.help);
  }
  return out;
}

}  // namespace srwec::config
