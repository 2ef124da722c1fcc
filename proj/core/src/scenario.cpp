#include "osc3/scenario.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace osc3 {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw ConfigError(fmt::format("{}: missing \"{}\"", where, key));
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(fmt::format("{}: \"{}\" must be a number", where, key));
  return v.get<double>();
}

std::vector<double> number_list(const json& j, std::string_view where) {
  if (!j.is_array()) throw ConfigError(fmt::format("{}: expected an array of numbers", where));
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(fmt::format("{}: expected an array of numbers", where));
    out.push_back(v.get<double>());
  }
  return out;
}

Profile parse_profile(const json& j, const std::string& where) {
  if (j.is_number()) return Profile::constant(j.get<double>());
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(fmt::format("{}: expected a number or an object with a \"kind\"", where));
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") return Profile::constant(number(j, "value", where));
    if (kind == "quench") return Profile::quench(number(j, "initial", where), number(j, "final", where));
    if (kind == "tabulated") {
      if (!j.contains("times") || !j.contains("values")) {
        throw ConfigError(fmt::format("{}: tabulated profile needs \"times\" and \"values\"", where));
      }
      return Profile::tabulated(number_list(j.at("times"), where), number_list(j.at("values"), where));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
  throw ConfigError(fmt::format("{}: unknown profile kind \"{}\"", where, kind));
}

json profile_json(const Profile& p) {
  switch (p.kind()) {
    case Profile::Kind::constant:
      return {{"kind", "constant"}, {"value", p.at(0.0)}};
    case Profile::Kind::quench:
      return {{"kind", "quench"}, {"initial", p.at(0.0)}, {"final", p.right_limit(0.0)}};
    case Profile::Kind::tabulated:
      return {{"kind", "tabulated"}, {"times", p.knots()}, {"values", p.knot_values()}};
  }
  return {};
}

CouplingSchedule quench_set(double k0i, double k0f, std::array<double, 3> ji, std::array<double, 3> jf) {
  auto prof = [](double a, double b) { return a == b ? Profile::constant(a) : Profile::quench(a, b); };
  return {prof(k0i, k0f), prof(ji[0], jf[0]), prof(ji[1], jf[1]), prof(ji[2], jf[2])};
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(t_start >= 0.0)) throw ConfigError(fmt::format("t_start must be ≥ 0, got {}", t_start));
  if (!(t_end > t_start)) throw ConfigError(fmt::format("t_end ({}) must exceed t_start ({})", t_end, t_start));
  if (samples < 2) throw ConfigError(fmt::format("samples must be ≥ 2, got {}", samples));
  for (double a : alphas) {
    if (!(a > 0.0)) throw ConfigError(fmt::format("Rényi orders must be positive, got {}", a));
  }
  if (!(reltol >= 1e-13 && reltol <= 1e-6)) throw ConfigError(fmt::format("reltol {} outside [1e-13, 1e-6]", reltol));
}

std::vector<double> ScenarioConfig::times() const {
  std::vector<double> t(samples);
  const double h = (t_end - t_start) / (samples - 1);
  for (int i = 0; i < samples; ++i) t[i] = t_start + i * h;
  t.back() = t_end;
  return t;
}

ScenarioConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"name",    "schedule", "t_start", "t_end",  "samples",
                                           "alphas",  "reltol",   "oracle",  "outputs"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(fmt::format("unknown config key \"{}\"", key));
  }

  ScenarioConfig c;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("\"name\" must be a string");
    c.name = j.at("name").get<std::string>();
  }
  if (!j.contains("schedule") || !j.at("schedule").is_object()) throw ConfigError("config needs a \"schedule\" object");
  const json& s = j.at("schedule");
  for (const auto& [key, _] : s.items()) {
    if (key != "k0" && key != "j12" && key != "j13" && key != "j23") {
      throw ConfigError(fmt::format("unknown schedule parameter \"{}\"", key));
    }
  }
  for (const char* key : {"k0", "j12", "j13", "j23"}) {
    if (!s.contains(key)) throw ConfigError(fmt::format("schedule is missing \"{}\"", key));
  }
  c.schedule.k0 = parse_profile(s.at("k0"), "schedule.k0");
  c.schedule.j12 = parse_profile(s.at("j12"), "schedule.j12");
  c.schedule.j13 = parse_profile(s.at("j13"), "schedule.j13");
  c.schedule.j23 = parse_profile(s.at("j23"), "schedule.j23");

  if (j.contains("t_start")) c.t_start = number(j, "t_start", "config");
  c.t_end = number(j, "t_end", "config");
  if (j.contains("samples")) {
    const json& v = j.at("samples");
    if (!v.is_number_integer()) throw ConfigError("\"samples\" must be an integer");
    c.samples = v.get<int>();
  }
  if (j.contains("alphas")) c.alphas = number_list(j.at("alphas"), "alphas");
  if (j.contains("reltol")) c.reltol = number(j, "reltol", "config");
  if (j.contains("oracle")) {
    if (!j.at("oracle").is_boolean()) throw ConfigError("\"oracle\" must be true or false");
    c.oracle = j.at("oracle").get<bool>();
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (!o.is_object()) throw ConfigError("\"outputs\" must be an object");
    for (const auto& [key, v] : o.items()) {
      if (key != "csv" && key != "plot") throw ConfigError(fmt::format("unknown output \"{}\"", key));
      if (!v.is_string()) throw ConfigError(fmt::format("outputs.{} must be a path string", key));
    }
    if (o.contains("csv")) c.csv_path = o.at("csv").get<std::string>();
    if (o.contains("plot")) c.plot_path = o.at("plot").get<std::string>();
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["schedule"] = {{"k0", profile_json(c.schedule.k0)},
                   {"j12", profile_json(c.schedule.j12)},
                   {"j13", profile_json(c.schedule.j13)},
                   {"j23", profile_json(c.schedule.j23)}};
  j["t_start"] = c.t_start;
  j["t_end"] = c.t_end;
  j["samples"] = c.samples;
  j["alphas"] = c.alphas;
  j["reltol"] = c.reltol;
  j["oracle"] = c.oracle;
  json out = json::object();
  if (!c.csv_path.empty()) out["csv"] = c.csv_path;
  if (!c.plot_path.empty()) out["plot"] = c.plot_path;
  j["outputs"] = out;
  return j.dump(2);
}

ScenarioConfig builtin_scenario(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "fig1") {
    c.schedule = quench_set(4.0, 6.0, {1.0, 3.0, 8.0}, {2.0, 4.0, 7.0});
    c.t_end = 50.0;
    c.samples = 5001;
  } else if (name == "fig2") {
    c.schedule = quench_set(0.1, 0.1, {1.0, 2.5, 3.0}, {2.0, 3.5, 4.0});
    c.t_end = 50.0;
    c.samples = 5001;
  } else if (name == "fig3") {
    c.schedule = quench_set(0.1, -0.1, {1.0, 2.5, 3.0}, {2.0, 3.5, 4.0});
    c.t_end = 5.0;
    c.samples = 501;
  } else {
    throw ConfigError(fmt::format("unknown scenario \"{}\" (expected fig1, fig2 or fig3)", name));
  }
  return c;
}

std::vector<std::string> builtin_names() { return {"fig1", "fig2", "fig3"}; }

}  // namespace osc3
