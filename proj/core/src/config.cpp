#include "pathqv/config.hpp"

#include <set>
#include <type_traits>

#include "json.hpp"
#include "pathqv/error.hpp"
#include "pathqv/jumps.hpp"

namespace pathqv {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  // nlohmann converts -3 to a huge unsigned and 2.5 to 2; both are input errors.
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    const bool ok = std::is_unsigned_v<T> ? v.is_number_unsigned() : v.is_number_integer();
    if (!ok) {
      throw ConfigError("key '" + key + "' in " + where + " must be " +
                        (std::is_unsigned_v<T> ? "a nonnegative integer" : "an integer"));
    }
  }
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + where + " has the wrong type");
  }
}

JumpLaw law_from(const json& j) {
  const std::string where = "jump law";
  if (!j.is_object()) throw ConfigError("jump law must be an object");
  const auto kind = get_or<std::string>(j, "kind", "", where);
  if (kind == "uniform") {
    only_keys(j, {"kind", "lo", "hi"}, where);
    return JumpLaw::uniform(get_or(j, "lo", -1.0, where), get_or(j, "hi", 1.0, where));
  }
  if (kind == "normal") {
    only_keys(j, {"kind", "mean", "sd"}, where);
    return JumpLaw::normal(get_or(j, "mean", 0.0, where), get_or(j, "sd", 1.0, where));
  }
  if (kind == "point_mass") {
    only_keys(j, {"kind", "value"}, where);
    if (!j.contains("value")) throw ConfigError("point_mass law needs 'value'");
    return JumpLaw::point_mass(get_or(j, "value", 1.0, where));
  }
  throw ConfigError("unknown jump law kind '" + kind + "'");
}

json law_to(const JumpLaw& law) {
  switch (law.kind()) {
    case JumpLaw::Kind::Uniform: return {{"kind", "uniform"}, {"lo", law.p0()}, {"hi", law.p1()}};
    case JumpLaw::Kind::Normal: return {{"kind", "normal"}, {"mean", law.p0()}, {"sd", law.p1()}};
    case JumpLaw::Kind::PointMass: return {{"kind", "point_mass"}, {"value", law.p0()}};
    case JumpLaw::Kind::Custom: break;
  }
  throw ConfigError("custom jump laws cannot be serialized");
}

ProcessModel model_from(const json& j) {
  if (j.is_string()) return preset_model(j.get<std::string>());
  const std::string where = "model";
  only_keys(j, {"name", "preset", "horizon", "x0", "sigma", "drift", "compound_poisson",
                "fixed_jumps", "fbm"},
            where);
  ProcessModel m;
  if (j.contains("preset")) m = preset_model(get_or<std::string>(j, "preset", "", where));
  m.name = get_or(j, "name", m.name, where);
  m.horizon = get_or(j, "horizon", m.horizon, where);
  m.x0 = get_or(j, "x0", m.x0, where);
  m.sigma = get_or(j, "sigma", m.sigma, where);
  if (j.contains("drift")) {
    const auto& d = j.at("drift");
    only_keys(d, {"rate", "amplitude", "frequency"}, "drift");
    m.drift.rate = get_or(d, "rate", 0.0, "drift");
    m.drift.amplitude = get_or(d, "amplitude", 0.0, "drift");
    m.drift.frequency = get_or(d, "frequency", 1.0, "drift");
  }
  if (j.contains("compound_poisson")) {
    m.compound_poisson.clear();
    if (!j.at("compound_poisson").is_array()) throw ConfigError("compound_poisson must be a list");
    for (const auto& c : j.at("compound_poisson")) {
      only_keys(c, {"intensity", "law"}, "compound_poisson entry");
      if (!c.contains("law")) throw ConfigError("compound_poisson entry needs 'law'");
      m.compound_poisson.push_back(
          {get_or(c, "intensity", 0.0, "compound_poisson entry"), law_from(c.at("law"))});
    }
  }
  if (j.contains("fixed_jumps")) {
    m.fixed_jumps.clear();
    if (!j.at("fixed_jumps").is_array()) throw ConfigError("fixed_jumps must be a list");
    for (const auto& f : j.at("fixed_jumps")) {
      only_keys(f, {"time", "law"}, "fixed_jumps entry");
      if (!f.contains("time") || !f.contains("law")) {
        throw ConfigError("fixed_jumps entry needs 'time' and 'law'");
      }
      m.fixed_jumps.push_back({get_or(f, "time", 0.0, "fixed_jumps entry"), law_from(f.at("law"))});
    }
  }
  if (j.contains("fbm")) {
    if (j.at("fbm").is_null()) {
      m.fbm.reset();
    } else {
      only_keys(j.at("fbm"), {"hurst", "scale"}, "fbm");
      m.fbm = FbmSpec{get_or(j.at("fbm"), "hurst", 0.75, "fbm"),
                      get_or(j.at("fbm"), "scale", 1.0, "fbm")};
    }
  }
  m.validate();
  return m;
}

json model_to(const ProcessModel& m) {
  json j;
  j["name"] = m.name;
  j["horizon"] = m.horizon;
  j["x0"] = m.x0;
  j["sigma"] = m.sigma;
  j["drift"] = {{"rate", m.drift.rate}, {"amplitude", m.drift.amplitude},
                {"frequency", m.drift.frequency}};
  j["compound_poisson"] = json::array();
  for (const auto& c : m.compound_poisson) {
    j["compound_poisson"].push_back({{"intensity", c.intensity}, {"law", law_to(c.law)}});
  }
  j["fixed_jumps"] = json::array();
  for (const auto& f : m.fixed_jumps) {
    j["fixed_jumps"].push_back({{"time", f.time}, {"law", law_to(f.law)}});
  }
  if (m.fbm) {
    j["fbm"] = {{"hurst", m.fbm->hurst}, {"scale", m.fbm->scale}};
  } else {
    j["fbm"] = nullptr;
  }
  return j;
}

CoupledSequence sequence_from(const json& j) {
  const std::string where = "sequence";
  only_keys(j, {"base", "rule", "noise_scale", "noise_hurst"}, where);
  CoupledSequence s;
  if (j.contains("base")) s.base = model_from(j.at("base"));
  s.rule = parse_coupling_rule(get_or<std::string>(j, "rule", "identity", where));
  s.noise_scale = get_or(j, "noise_scale", 1.0, where);
  s.noise_hurst = get_or(j, "noise_hurst", 0.75, where);
  return s;
}

json sequence_to(const CoupledSequence& s) {
  return {{"base", model_to(s.base)},
          {"rule", to_string(s.rule)},
          {"noise_scale", s.noise_scale},
          {"noise_hurst", s.noise_hurst}};
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ProcessModel preset_model(const std::string& name) {
  ProcessModel m;
  m.name = name;
  const JumpLaw u11 = JumpLaw::uniform(-1.0, 1.0);
  if (name == "brownian") {
    m.sigma = 1.0;
  } else if (name == "brownian_drift") {
    m.sigma = 1.0;
    m.drift.rate = 0.5;
  } else if (name == "poisson") {
    m.compound_poisson.push_back({1.0, JumpLaw::point_mass(1.0)});
  } else if (name == "compound_poisson") {
    m.compound_poisson.push_back({3.0, u11});
  } else if (name == "cp_drift") {
    m.drift.rate = 1.0;
    m.compound_poisson.push_back({3.0, u11});
  } else if (name == "jump_diffusion") {
    m.sigma = 1.0;
    m.compound_poisson.push_back({3.0, u11});
  } else if (name == "fbm") {
    m.fbm = FbmSpec{0.75, 1.0};
  } else if (name == "dirichlet") {
    m.sigma = 1.0;
    m.compound_poisson.push_back({3.0, u11});
    m.fbm = FbmSpec{0.75, 1.0};
  } else if (name == "fixed_schedule") {
    m.sigma = 1.0;
    m.fixed_jumps.push_back({0.5, JumpLaw::point_mass(2.0)});
  } else if (name == "layered_poisson") {
    m = counterexample("layered_poisson").sequence->base;
  } else if (name == "x2_base") {
    m.sigma = 0.5;
    m.compound_poisson.push_back({2.0, JumpLaw::uniform(-0.5, 0.5)});
  } else if (name == "truncation_base") {
    m.sigma = 1.0;
    m.compound_poisson.push_back({400.0, u11});
  } else {
    throw ConfigError("unknown model preset '" + name + "'");
  }
  return m;
}

std::vector<std::string> preset_model_names() {
  return {"brownian", "brownian_drift", "poisson",         "compound_poisson",
          "cp_drift", "jump_diffusion", "fbm",             "dirichlet",
          "fixed_schedule", "layered_poisson", "x2_base", "truncation_base"};
}

ProcessModel model_from_json(const std::string& json_text) {
  try {
    return model_from(parse_text(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

std::string model_to_json(const ProcessModel& model) { return model_to(model).dump(); }

CoupledSequence sequence_from_json(const std::string& json_text) {
  try {
    return sequence_from(parse_text(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid sequence: ") + e.what());
  }
}

std::string sequence_to_json(const CoupledSequence& seq) { return sequence_to(seq).dump(); }

ExperimentSpec experiment_from_json(const std::string& json_text) {
  const json j = parse_text(json_text);
  const std::string where = "experiment";
  only_keys(j, {"scenario", "kind", "statistic", "mode", "p", "sequence", "transforms",
                "integrand", "thresholds", "n_grid", "a_grid", "level", "grid_level",
                "partition", "replicas", "seed"},
            where);
  try {
    ExperimentSpec s;
    const auto scenario = get_or<std::string>(j, "scenario", "custom", where);
    if (scenario != "custom") s = scenario_preset(scenario);
    s.scenario = scenario;
    if (j.contains("kind")) s.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("statistic")) s.statistic = parse_statistic(j.at("statistic").get<std::string>());
    if (j.contains("mode")) s.mode = parse_convergence_mode(j.at("mode").get<std::string>());
    s.p = get_or(j, "p", s.p, where);
    if (j.contains("sequence")) s.sequence = sequence_from(j.at("sequence"));
    if (j.contains("transforms")) {
      const auto& t = j.at("transforms");
      only_keys(t, {"name", "params"}, "transforms");
      s.transforms.name = get_or<std::string>(t, "name", s.transforms.name, "transforms");
      s.transforms.params =
          get_or<std::map<std::string, double>>(t, "params", s.transforms.params, "transforms");
      builtin_sequence(s.transforms.name, s.transforms.params);
    }
    if (j.contains("integrand")) {
      if (j.at("integrand").is_null()) {
        s.integrand.reset();
      } else {
        s.integrand = model_from(j.at("integrand"));
      }
    }
    s.thresholds = get_or(j, "thresholds", s.thresholds, where);
    s.n_grid = get_or(j, "n_grid", s.n_grid, where);
    s.a_grid = get_or(j, "a_grid", s.a_grid, where);
    s.level = get_or(j, "level", s.level, where);
    s.grid_level = get_or(j, "grid_level", s.grid_level, where);
    if (j.contains("partition")) s.partition = parse_partition_kind(j.at("partition").get<std::string>());
    s.replicas = get_or(j, "replicas", s.replicas, where);
    s.seed = get_or(j, "seed", s.seed, where);
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid experiment: ") + e.what());
  }
}

std::string experiment_to_json(const ExperimentSpec& s) {
  json j;
  j["scenario"] = s.scenario;
  j["kind"] = to_string(s.kind);
  j["statistic"] = to_string(s.statistic);
  j["mode"] = to_string(s.mode);
  j["p"] = s.p;
  j["sequence"] = sequence_to(s.sequence);
  j["transforms"] = {{"name", s.transforms.name}, {"params", s.transforms.params}};
  j["integrand"] = s.integrand ? model_to(*s.integrand) : json(nullptr);
  j["thresholds"] = s.thresholds;
  j["n_grid"] = s.n_grid;
  j["a_grid"] = s.a_grid;
  j["level"] = s.level;
  j["grid_level"] = s.grid_level;
  j["partition"] = std::string(to_string(s.partition));
  j["replicas"] = s.replicas;
  j["seed"] = s.seed;
  return j.dump();
}

}  // namespace pathqv
