#include <qarrival/config.hpp>
#include <qarrival/errors.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace qarrival::io {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw ValidationError(where + ": expected an object");
  }
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) {
      known = known || key == a;
    }
    if (!known) {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) {
    throw ValidationError(where + ": missing '" + key + "'");
  }
  if (!j.at(key).is_number()) {
    throw ValidationError(where + "." + key + ": expected a number");
  }
  return j.at(key).get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::uint64_t unsigned_or(const json& j, const std::string& key, const std::string& where,
                          std::uint64_t fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number_unsigned()) {
    throw ValidationError(where + "." + key + ": expected a non-negative integer");
  }
  return j.at(key).get<std::uint64_t>();
}

PacketParams parse_params(const json& j) {
  require_object(j, "params");
  reject_unknown(j, "params", {"sigma0", "u", "C", "mass_amu", "mass_g", "hbar"});
  const bool amu = j.contains("mass_amu");
  const bool grams = j.contains("mass_g");
  if (amu == grams) {
    throw ValidationError("params: give exactly one of 'mass_amu' or 'mass_g'");
  }
  const double sigma0 = number(j, "sigma0", "params");
  const double u = number(j, "u", "params");
  const double C = number(j, "C", "params");
  const double hbar = number_or(j, "hbar", "params", kHbarCgs);
  if (amu) {
    const double m_amu = number(j, "mass_amu", "params");
    if (!(m_amu > 0)) {
      std::ostringstream msg;
      msg << "mass_amu = " << m_amu << ": must be finite and > 0";
      throw ValidationError(msg.str());
    }
    return make_params_with_hbar(sigma0, u, C, m_amu * kAmuGrams, hbar);
  }
  return make_params_with_hbar(sigma0, u, C, number(j, "mass_g", "params"), hbar);
}

DetectorConfig parse_detector(const json& j) {
  require_object(j, "detector");
  reject_unknown(j, "detector",
                 {"X", "cutoff", "quad_rel_tol", "quad_abs_tol", "max_cutoff_iters"});
  DetectorConfig det;
  det.X = number(j, "X", "detector");
  if (j.contains("cutoff")) {
    const auto& c = j.at("cutoff");
    if (c.is_string() && c.get<std::string>() == "three_sigma") {
      det.cutoff = Cutoff::three_sigma();
    } else if (c.is_object()) {
      reject_unknown(c, "detector.cutoff", {"fixed_T"});
      det.cutoff = Cutoff::fixed(number(c, "fixed_T", "detector.cutoff"));
    } else {
      throw ValidationError("detector.cutoff: expected \"three_sigma\" or {\"fixed_T\": seconds}");
    }
  }
  det.quad_rel_tol = number_or(j, "quad_rel_tol", "detector", det.quad_rel_tol);
  det.quad_abs_tol = number_or(j, "quad_abs_tol", "detector", det.quad_abs_tol);
  det.max_cutoff_iters = unsigned_or(j, "max_cutoff_iters", "detector", det.max_cutoff_iters);
  return det;
}

sweep::Grid parse_grid(const json& j) {
  require_object(j, "sweep.grid");
  reject_unknown(j, "sweep.grid", {"variable", "min", "max", "count"});
  sweep::Grid g;
  if (!j.contains("variable") || !j.at("variable").is_string()) {
    throw ValidationError("sweep.grid.variable: expected \"x\" or \"t\"");
  }
  const auto var = sweep::parse_grid_variable(j.at("variable").get<std::string>());
  if (!var) {
    throw ValidationError("sweep.grid.variable: expected \"x\" or \"t\"");
  }
  g.variable = *var;
  g.min = number(j, "min", "sweep.grid");
  g.max = number(j, "max", "sweep.grid");
  g.count = unsigned_or(j, "count", "sweep.grid", 0);
  return g;
}

} // namespace

RunConfig parse_config(const json& doc) {
  require_object(doc, "config");
  reject_unknown(doc, "config", {"params", "detector", "sweep", "mc", "output"});
  if (!doc.contains("params") || !doc.contains("detector") || !doc.contains("sweep")) {
    throw ValidationError("config: 'params', 'detector' and 'sweep' are required");
  }
  RunConfig cfg;
  auto& spec = cfg.sweep;
  spec.base = parse_params(doc.at("params"));
  spec.det = parse_detector(doc.at("detector"));

  const auto& s = doc.at("sweep");
  require_object(s, "sweep");
  reject_unknown(s, "sweep", {"axis", "values", "outputs", "t", "grid"});
  if (!s.contains("axis") || !s.at("axis").is_string()) {
    throw ValidationError("sweep.axis: expected one of mass_amu, X, C, t");
  }
  const auto axis = sweep::parse_axis(s.at("axis").get<std::string>());
  if (!axis) {
    throw ValidationError("sweep.axis: unknown axis '" + s.at("axis").get<std::string>() + "'");
  }
  spec.axis = *axis;
  if (!s.contains("values") || !s.at("values").is_array()) {
    throw ValidationError("sweep.values: expected an array of numbers");
  }
  for (const auto& v : s.at("values")) {
    if (!v.is_number()) {
      throw ValidationError("sweep.values: expected an array of numbers");
    }
    spec.values.push_back(v.get<double>());
  }
  if (!s.contains("outputs") || !s.at("outputs").is_array()) {
    throw ValidationError("sweep.outputs: expected an array of quantity names");
  }
  for (const auto& q : s.at("outputs")) {
    const auto parsed = q.is_string() ? sweep::parse_quantity(q.get<std::string>()) : std::nullopt;
    if (!parsed) {
      throw ValidationError("sweep.outputs: unknown quantity " + q.dump());
    }
    spec.outputs.push_back(*parsed);
  }
  spec.t = number_or(s, "t", "sweep", 0.0);
  if (s.contains("grid")) {
    spec.grid = parse_grid(s.at("grid"));
  }

  if (doc.contains("mc")) {
    const auto& m = doc.at("mc");
    require_object(m, "mc");
    reject_unknown(m, "mc", {"count", "seed"});
    cfg.mc.count = unsigned_or(m, "count", "mc", cfg.mc.count);
    cfg.mc.seed = unsigned_or(m, "seed", "mc", cfg.mc.seed);
    if (cfg.mc.count == 0) {
      throw ValidationError("mc.count: must be >= 1");
    }
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) {
      throw ValidationError("output: expected a path string");
    }
    cfg.output = doc.at("output").get<std::string>();
  }
  sweep::validate(spec);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("config file not found or unreadable: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  const auto& spec = cfg.sweep;
  json params = {{"sigma0", spec.base.sigma0},
                 {"u", spec.base.u},
                 {"C", spec.base.C},
                 {"mass_g", spec.base.mass},
                 {"hbar", spec.base.hbar}};
  json cutoff = spec.det.cutoff.policy == CutoffPolicy::ThreeSigma
                    ? json("three_sigma")
                    : json{{"fixed_T", spec.det.cutoff.fixed_T}};
  json det = {{"X", spec.det.X},
              {"cutoff", cutoff},
              {"quad_rel_tol", spec.det.quad_rel_tol},
              {"quad_abs_tol", spec.det.quad_abs_tol},
              {"max_cutoff_iters", spec.det.max_cutoff_iters}};
  json outputs = json::array();
  for (auto q : spec.outputs) {
    outputs.push_back(std::string(sweep::name(q)));
  }
  json grid = {{"variable", std::string(sweep::name(spec.grid.variable))},
               {"min", spec.grid.min},
               {"max", spec.grid.max},
               {"count", spec.grid.count}};
  json sw = {{"axis", std::string(sweep::name(spec.axis))},
             {"values", spec.values},
             {"outputs", outputs},
             {"t", spec.t},
             {"grid", grid}};
  return {{"params", params},
          {"detector", det},
          {"sweep", sw},
          {"mc", {{"count", cfg.mc.count}, {"seed", cfg.mc.seed}}},
          {"output", cfg.output}};
}

} // namespace qarrival::io
