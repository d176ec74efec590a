#include "trapres/cli/config.hpp"

#include "trapres/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>

namespace trapres::cli {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::rates: return "rates";
    case Experiment::resonances: return "resonances";
    case Experiment::weyl: return "weyl";
    case Experiment::gaps: return "gaps";
    case Experiment::model_checks: return "model_checks";
    case Experiment::transport: return "transport";
    case Experiment::perturbation: return "perturbation";
  }
  return "unknown";
}

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(output.formats.begin(), output.formats.end(), format) != output.formats.end();
}

namespace {

Experiment parse_experiment(const std::string& s) {
  for (Experiment e : {Experiment::rates, Experiment::resonances, Experiment::weyl, Experiment::gaps,
                       Experiment::model_checks, Experiment::transport, Experiment::perturbation})
    if (to_string(e) == s) return e;
  // The CLI spelling with a dash is accepted as well.
  if (s == "model-checks") return Experiment::model_checks;
  throw ConfigError("unknown experiment '" + s + "'");
}

void require_object(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

void read(const json& j, const char* key, const std::string& where, double& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) throw ConfigError(where + "." + key + ": must be finite");
}

void read(const json& j, const char* key, const std::string& where, int& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  out = v.get<int>();
}

void read(const json& j, const char* key, const std::string& where, std::string& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  out = v.get<std::string>();
}

void read(const json& j, const char* key, const std::string& where, std::vector<double>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
  out.clear();
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(where + "." + key + ": entries must be finite");
  }
}

void read(const json& j, const char* key, const std::string& where, std::vector<std::string>& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array of strings");
  out.clear();
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(where + "." + key + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  require_object(j, "config",
                 {"schema_version", "experiment", "model", "solver", "sweep", "band", "dynamics", "gaps", "output",
                  "seed"});
  ExperimentConfig c;
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  read(j, "schema_version", "config", c.schema_version);
  if (c.schema_version != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  if (!j.contains("experiment")) throw ConfigError("config: missing experiment");
  std::string exp;
  read(j, "experiment", "config", exp);
  c.experiment = parse_experiment(exp);

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
      throw ConfigError("config.seed: expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }

  if (j.contains("model")) {
    const json& m = j.at("model");
    require_object(m, "model", {"kind", "cross_section", "length", "sphere_dimension", "neck_a", "scale_C", "V0"});
    read(m, "kind", "model", c.model.kind);
    read(m, "cross_section", "model", c.model.cross_section);
    read(m, "length", "model", c.model.length);
    read(m, "sphere_dimension", "model", c.model.sphere_dimension);
    read(m, "neck_a", "model", c.model.neck_a);
    read(m, "scale_C", "model", c.model.scale_C);
    read(m, "V0", "model", c.model.V0);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    require_object(s, "solver", {"theta", "theta2", "R", "grid_max", "N", "mode"});
    read(s, "theta", "solver", c.solver.theta);
    read(s, "theta2", "solver", c.solver.theta2);
    read(s, "R", "solver", c.solver.R);
    read(s, "grid_max", "solver", c.solver.grid_max);
    read(s, "N", "solver", c.solver.N);
    read(s, "mode", "solver", c.solver.mode);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_object(s, "sweep", {"h_values"});
    read(s, "h_values", "sweep", c.h_values);
  }
  if (j.contains("band")) {
    const json& b = j.at("band");
    require_object(b, "band", {"re_window", "epsilon", "nu_min", "nu_max"});
    if (b.contains("re_window")) {
      std::vector<double> w;
      read(b, "re_window", "band", w);
      check(w.size() == 2, "band.re_window: expected two numbers");
      c.band.re_window = {w[0], w[1]};
    }
    read(b, "epsilon", "band", c.band.epsilon);
    read(b, "nu_min", "band", c.band.nu_min);
    read(b, "nu_max", "band", c.band.nu_max);
  }
  if (j.contains("dynamics")) {
    const json& d = j.at("dynamics");
    require_object(d, "dynamics", {"horizon", "samples", "energy", "s_values", "transport_r"});
    read(d, "horizon", "dynamics", c.dynamics.horizon);
    read(d, "samples", "dynamics", c.dynamics.samples);
    read(d, "energy", "dynamics", c.dynamics.energy);
    read(d, "s_values", "dynamics", c.dynamics.s_values);
    read(d, "transport_r", "dynamics", c.dynamics.transport_r);
  }
  if (j.contains("gaps")) {
    const json& g = j.at("gaps");
    require_object(g, "gaps", {"lines", "step_fraction"});
    read(g, "lines", "gaps", c.gaps.lines);
    read(g, "step_fraction", "gaps", c.gaps.step_fraction);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_object(o, "output", {"directory", "formats"});
    read(o, "directory", "output", c.output.directory);
    read(o, "formats", "output", c.output.formats);
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, false);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  const auto& m = c.model;
  check(m.kind == "warped" || m.kind == "potential1d", "model.kind: expected warped or potential1d");
  check(m.cross_section == "circle" || m.cross_section == "sphere" || m.cross_section == "neck_torus",
        "model.cross_section: expected circle, sphere or neck_torus");
  check(m.length > 0, "model.length must be positive");
  check(m.sphere_dimension >= 2, "model.sphere_dimension must be >= 2");
  check(m.neck_a > 0 && m.neck_a < 10, "model.neck_a must lie in (0, 10)");
  check(m.scale_C >= 1, "model.scale_C must be >= 1");
  check(m.V0 > 0, "model.V0 must be positive");

  const auto& s = c.solver;
  check(s.theta > 0 && s.theta < std::numbers::pi / 2, "solver.theta must lie in (0, pi/2)");
  check(s.theta2 < std::numbers::pi / 2, "solver.theta2 must be below pi/2");
  check(s.theta2 >= s.theta + 0.1 - 1e-12, "solver.theta2 must exceed theta by at least 0.1");
  check(s.R > 0, "solver.R must be positive");
  check(s.grid_max >= 3 * s.R, "solver.grid_max must be >= 3 R");
  check(s.N >= 200, "solver.N must be >= 200");
  check(s.mode == "oracle" || s.mode == "solver", "solver.mode: expected oracle or solver");

  check(!c.h_values.empty(), "sweep.h_values must not be empty");
  for (double h : c.h_values) check(h > 0 && h <= 1, "sweep.h_values entries must lie in (0, 1]");

  const auto& b = c.band;
  check(b.re_window.first >= 0 && b.re_window.first < b.re_window.second,
        "band.re_window must satisfy 0 <= a < b");
  check(b.epsilon > 0, "band.epsilon must be positive");
  check(b.nu_min > b.epsilon && b.nu_max >= b.nu_min, "band: need epsilon < nu_min <= nu_max");

  const auto& d = c.dynamics;
  check(d.horizon >= 20, "dynamics.horizon must be >= 20");
  check(d.samples >= 1 && d.samples <= 1000, "dynamics.samples must lie in [1, 1000]");
  check(d.energy > 0, "dynamics.energy must be positive");
  for (double r : d.transport_r) check(r > 0 && r < 4, "dynamics.transport_r entries must lie in (0, 4)");

  check(c.gaps.step_fraction > 0 && c.gaps.step_fraction <= 1, "gaps.step_fraction must lie in (0, 1]");

  check(!c.output.directory.empty(), "output.directory must not be empty");
  check(!c.output.formats.empty(), "output.formats must not be empty");
  for (const auto& f : c.output.formats) check(f == "csv" || f == "json", "output.formats: expected csv or json");
  check(c.wants("csv"), "output.formats must include csv");

  const bool dynamics_only = m.cross_section == "neck_torus";
  if (dynamics_only)
    check(c.experiment == Experiment::rates, "model.cross_section neck_torus is only available for rates");
  if (m.kind == "potential1d")
    check(c.experiment == Experiment::resonances, "model.kind potential1d is only available for resonances");
  if (m.cross_section == "sphere")
    check(c.experiment == Experiment::resonances || c.experiment == Experiment::weyl,
          "model.cross_section sphere is only available for resonances and weyl");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  j["model"] = {{"kind", c.model.kind},         {"cross_section", c.model.cross_section},
                {"length", c.model.length},     {"sphere_dimension", c.model.sphere_dimension},
                {"neck_a", c.model.neck_a},     {"scale_C", c.model.scale_C},
                {"V0", c.model.V0}};
  j["solver"] = {{"theta", c.solver.theta}, {"theta2", c.solver.theta2}, {"R", c.solver.R},
                 {"grid_max", c.solver.grid_max}, {"N", c.solver.N}, {"mode", c.solver.mode}};
  j["sweep"] = {{"h_values", c.h_values}};
  j["band"] = {{"re_window", {c.band.re_window.first, c.band.re_window.second}},
               {"epsilon", c.band.epsilon},
               {"nu_min", c.band.nu_min},
               {"nu_max", c.band.nu_max}};
  j["dynamics"] = {{"horizon", c.dynamics.horizon},   {"samples", c.dynamics.samples},
                   {"energy", c.dynamics.energy},     {"s_values", c.dynamics.s_values},
                   {"transport_r", c.dynamics.transport_r}};
  j["gaps"] = {{"lines", c.gaps.lines}, {"step_fraction", c.gaps.step_fraction}};
  j["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
  return j;
}

}  // namespace trapres::cli
