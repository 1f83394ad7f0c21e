#include <gtest/gtest.h>

#include "json.hpp"
#include "pathqv/config.hpp"
#include "pathqv/error.hpp"
#include "pathqv/experiments.hpp"

using namespace pathqv;

namespace {

void expect_same_model(const ProcessModel& a, const ProcessModel& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.horizon, b.horizon);
  EXPECT_EQ(a.x0, b.x0);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.drift.rate, b.drift.rate);
  EXPECT_EQ(a.drift.amplitude, b.drift.amplitude);
  EXPECT_EQ(a.drift.frequency, b.drift.frequency);
  ASSERT_EQ(a.compound_poisson.size(), b.compound_poisson.size());
  for (std::size_t i = 0; i < a.compound_poisson.size(); ++i) {
    EXPECT_EQ(a.compound_poisson[i].intensity, b.compound_poisson[i].intensity);
    EXPECT_EQ(a.compound_poisson[i].law.describe(), b.compound_poisson[i].law.describe());
  }
  ASSERT_EQ(a.fixed_jumps.size(), b.fixed_jumps.size());
  for (std::size_t i = 0; i < a.fixed_jumps.size(); ++i) {
    EXPECT_EQ(a.fixed_jumps[i].time, b.fixed_jumps[i].time);
    EXPECT_EQ(a.fixed_jumps[i].law.describe(), b.fixed_jumps[i].law.describe());
  }
  ASSERT_EQ(a.fbm.has_value(), b.fbm.has_value());
  if (a.fbm) {
    EXPECT_EQ(a.fbm->hurst, b.fbm->hurst);
    EXPECT_EQ(a.fbm->scale, b.fbm->scale);
  }
}

}  // namespace

TEST(ModelConfig, PresetsRoundTrip) {
  ASSERT_FALSE(preset_model_names().empty());
  for (const auto& name : preset_model_names()) {
    const auto m = preset_model(name);
    EXPECT_EQ(m.name, name);
    EXPECT_NO_THROW(m.validate());
    const auto text = model_to_json(m);
    expect_same_model(model_from_json(text), m);
    EXPECT_EQ(model_to_json(model_from_json(text)), text);
    expect_same_model(model_from_json("\"" + name + "\""), m);
  }
  EXPECT_THROW((void)preset_model("brownain"), ConfigError);
}

TEST(ModelConfig, PresetKeySuppliesDefaults) {
  const auto m = model_from_json(R"({"preset": "jump_diffusion", "sigma": 0.25, "name": "mine"})");
  EXPECT_EQ(m.name, "mine");
  EXPECT_EQ(m.sigma, 0.25);
  ASSERT_EQ(m.compound_poisson.size(), 1u);
  EXPECT_EQ(m.compound_poisson[0].intensity, 3.0);

  const auto custom = model_from_json(R"({
    "sigma": 1, "drift": {"rate": 0.5},
    "compound_poisson": [{"intensity": 2, "law": {"kind": "normal", "mean": 0, "sd": 0.3}}],
    "fixed_jumps": [{"time": 0.25, "law": {"kind": "point_mass", "value": -1}}],
    "fbm": {"hurst": 0.8}
  })");
  EXPECT_EQ(custom.drift.rate, 0.5);
  EXPECT_EQ(custom.drift.frequency, 1.0);
  EXPECT_EQ(custom.compound_poisson[0].law.kind(), JumpLaw::Kind::Normal);
  EXPECT_EQ(custom.compound_poisson[0].law.p1(), 0.3);
  EXPECT_EQ(custom.fixed_jumps[0].law.p0(), -1.0);
  EXPECT_EQ(custom.fbm->scale, 1.0);
  EXPECT_FALSE(model_from_json(R"({"preset": "dirichlet", "fbm": null})").fbm.has_value());
}

TEST(ModelConfig, RejectsMalformedInput) {
  for (const char* bad : {
           R"({"sigmaa": 1})",
           R"({"drift": {"rate": 1, "phase": 2}})",
           R"({"compound_poisson": [{"intensity": 1}]})",
           R"({"compound_poisson": {"intensity": 1}})",
           R"({"compound_poisson": [{"intensity": 1, "law": {"kind": "cauchy"}}]})",
           R"({"fixed_jumps": [{"time": 2, "law": {"kind": "point_mass", "value": 1}}]})",
           R"({"sigma": "one"})",
           R"({"sigma": -1})",
           R"({"fbm": {"hurst": 0.4}})",
           R"({"sigma": 1,)",
       }) {
    EXPECT_THROW((void)model_from_json(bad), ConfigError) << bad;
  }
  ProcessModel m;
  m.compound_poisson = {{1.0, JumpLaw::custom("c", [](RngStream& r) { return r.uniform(); })}};
  EXPECT_THROW((void)model_to_json(m), ConfigError);
}

TEST(SequenceConfig, RoundTrip) {
  const auto s = sequence_from_json(
      R"({"base": "x2_base", "rule": "add_fbm", "noise_scale": 2, "noise_hurst": 0.6})");
  EXPECT_EQ(s.rule, CouplingRule::AddFbm);
  EXPECT_EQ(s.noise_scale, 2.0);
  EXPECT_EQ(s.noise_hurst, 0.6);
  EXPECT_EQ(s.base.name, "x2_base");
  const auto back = sequence_from_json(sequence_to_json(s));
  EXPECT_EQ(sequence_to_json(back), sequence_to_json(s));
  EXPECT_THROW((void)sequence_from_json(R"({"rule": "shake"})"), ConfigError);
  EXPECT_THROW((void)sequence_from_json(R"({"rules": "add_noise"})"), ConfigError);
}

TEST(ExperimentConfig, ScenariosRoundTrip) {
  for (const auto& name : scenario_names()) {
    const auto spec = scenario_preset(name);
    const auto text = experiment_to_json(spec);
    const auto back = experiment_from_json(text);
    EXPECT_EQ(experiment_to_json(back), text) << name;
    EXPECT_EQ(back.replicas, spec.replicas);
    EXPECT_EQ(back.n_grid, spec.n_grid);
    EXPECT_EQ(back.a_grid, spec.a_grid);
    EXPECT_EQ(back.integrand.has_value(), spec.integrand.has_value());
  }
}

TEST(ExperimentConfig, ScenarioKeysAreOverridable) {
  const auto s = experiment_from_json(
      R"({"scenario": "x2_noise", "replicas": 7, "n_grid": [3, 9], "seed": 42,
          "transforms": {"name": "constant_square"}, "partition": "jump_adapted"})");
  EXPECT_EQ(s.scenario, "x2_noise");
  EXPECT_EQ(s.replicas, 7u);
  EXPECT_EQ(s.n_grid, (std::vector<int>{3, 9}));
  EXPECT_EQ(s.seed, 42u);
  EXPECT_EQ(s.level, 14);
  EXPECT_EQ(s.transforms.name, "constant_square");
  EXPECT_EQ(s.partition, PartitionKind::JumpAdapted);
  EXPECT_EQ(s.sequence.rule, CouplingRule::AddNoise);

  const auto custom = experiment_from_json(R"({"sequence": {"base": "brownian"}})");
  EXPECT_EQ(custom.scenario, "custom");
  EXPECT_EQ(custom.kind, ExperimentKind::QvStability);
}

TEST(ExperimentConfig, RejectsMalformedInput) {
  for (const char* bad : {
           R"({"scenarios": "x2_noise"})",
           R"({"scenario": "x3_noise"})",
           R"({"kind": "triple_limit"})",
           R"({"statistic": "sup_of_difference"})",
           R"({"replicas": 0})",
           R"({"replicas": -3})",
           R"({"n_grid": []})",
           R"({"thresholds": [0]})",
           R"({"transforms": {"name": "mollified_sign"}})",
           R"({"transforms": {"name": "constant_identity", "extra": 1}})",
           R"({"kind": "double_limit", "statistic": "sup_of_difference"})",
           R"({"partition": "triadic"})",
           R"([1, 2])",
       }) {
    EXPECT_THROW((void)experiment_from_json(bad), ConfigError) << bad;
  }
  EXPECT_THROW((void)experiment_from_json(R"({"level": 40})"), ResourceLimitError);
}
