#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pathqv/config.hpp"
#include "pathqv/error.hpp"
#include "pathqv/experiments.hpp"
#include "pathqv/follmer.hpp"
#include "pathqv/jumps.hpp"
#include "pathqv/models.hpp"
#include "pathqv/path_io.hpp"
#include "pathqv/plot_data.hpp"
#include "pathqv/qv.hpp"
#include "pathqv/stats.hpp"

namespace pathqv::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kIntegrandSeedOffset = 0x9E3779B97F4A7C15ULL;

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> level;
  std::optional<int> grid_level;
  std::optional<std::size_t> replicas;
  std::string format = "csv";
  std::string partition;
  std::string model;
  std::string integrand;
  std::optional<int> n;
  std::vector<double> a_grid;
  std::string truncation = "plain";
  std::string scenario;
};

// Flags override the config file; everything lands in one resolved object.
struct RunConfig {
  json model;
  json integrand;
  std::optional<std::uint64_t> seed;
  int level = -1;
  int grid_level = -1;
  std::size_t replicas = 0;
  std::optional<int> n;
  std::string partition = "dyadic";
  std::vector<double> a_grid{0.5, 0.2, 0.1, 0.05};
  std::string truncation = "plain";
  std::string out_dir;
  std::string format = "csv";
  json experiment;
};

const std::set<std::string> kConfigKeys = {
    "command", "model",     "integrand", "seed",   "level",  "grid_level", "replicas",
    "n",       "partition", "a_grid",    "truncation", "out", "format",    "experiment"};

RunConfig resolve(const Options& o) {
  RunConfig rc;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config '" + o.config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
      if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    try {
      if (j.contains("command") && j.at("command").get<std::string>() != o.command) {
        throw ConfigError("config is for command '" + j.at("command").get<std::string>() + "'");
      }
      if (j.contains("model")) rc.model = j.at("model");
      if (j.contains("integrand")) rc.integrand = j.at("integrand");
      // Reject -3 or 2.5 where a count is expected instead of letting them wrap or truncate.
      const auto whole = [&j](const char* key, bool nonneg) -> const json& {
        const json& v = j.at(key);
        if (!(nonneg ? v.is_number_unsigned() : v.is_number_integer())) {
          throw ConfigError(std::string("config key '") + key + "' must be " +
                            (nonneg ? "a nonnegative integer" : "an integer"));
        }
        return v;
      };
      if (j.contains("seed")) rc.seed = whole("seed", true).get<std::uint64_t>();
      if (j.contains("level")) rc.level = whole("level", false).get<int>();
      if (j.contains("grid_level")) rc.grid_level = whole("grid_level", false).get<int>();
      if (j.contains("replicas")) rc.replicas = whole("replicas", true).get<std::size_t>();
      if (j.contains("n")) rc.n = whole("n", false).get<int>();
      if (j.contains("partition")) rc.partition = j.at("partition").get<std::string>();
      if (j.contains("a_grid")) rc.a_grid = j.at("a_grid").get<std::vector<double>>();
      if (j.contains("truncation")) rc.truncation = j.at("truncation").get<std::string>();
      if (j.contains("out")) rc.out_dir = j.at("out").get<std::string>();
      if (j.contains("format")) rc.format = j.at("format").get<std::string>();
      if (j.contains("experiment")) rc.experiment = j.at("experiment");
    } catch (const json::exception& e) {
      throw ConfigError(std::string("ill-typed config value: ") + e.what());
    }
  }
  if (!o.model.empty()) rc.model = o.model;
  if (!o.integrand.empty()) rc.integrand = o.integrand;
  if (o.seed) rc.seed = o.seed;
  if (o.level) rc.level = *o.level;
  if (o.grid_level) rc.grid_level = *o.grid_level;
  if (o.replicas) rc.replicas = *o.replicas;
  if (o.n) rc.n = o.n;
  if (!o.partition.empty()) rc.partition = o.partition;
  if (!o.a_grid.empty()) rc.a_grid = o.a_grid;
  if (o.truncation != "plain") rc.truncation = o.truncation;
  if (!o.out_dir.empty()) rc.out_dir = o.out_dir;
  if (o.format != "csv") rc.format = o.format;
  if (rc.format != "csv" && rc.format != "json") throw ConfigError("format must be csv or json");
  if (rc.truncation != "plain" && rc.truncation != "compensated") {
    throw ConfigError("truncation must be plain or compensated");
  }
  parse_partition_kind(rc.partition);
  return rc;
}

json echo(const RunConfig& rc, const std::string& command) {
  json j;
  j["command"] = command;
  j["model"] = rc.model;
  if (!rc.integrand.is_null()) j["integrand"] = rc.integrand;
  j["seed"] = rc.seed ? json(*rc.seed) : json(nullptr);
  j["level"] = rc.level;
  j["grid_level"] = rc.grid_level;
  if (rc.n) j["n"] = *rc.n;
  j["partition"] = rc.partition;
  return j;
}

// A path source: a process model, a coupled counterexample, or the
// deterministic oscillator.
struct Source {
  std::string name;
  std::optional<ProcessModel> model;
  std::optional<CoupledSequence> coupled;
  std::optional<Counterexample> deterministic;

  [[nodiscard]] bool stochastic() const { return !deterministic.has_value(); }
};

Source resolve_source(const json& spec) {
  if (spec.is_null()) throw ConfigError("no model given (use --model or the config 'model' key)");
  Source src;
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    src.name = name;
    if (name == "oscillator") {
      src.deterministic = counterexample(name);
      return src;
    }
    if (name == "poisson_scale") {
      src.coupled = counterexample(name).sequence;
      return src;
    }
    src.model = preset_model(name);
    return src;
  }
  src.model = model_from_json(spec.dump());
  src.name = src.model->name;
  return src;
}

struct Drawn {
  CadlagPath path;
  std::optional<SampledPath> sampled;
  int natural_level = -1;
};

Drawn draw(const Source& src, const RunConfig& rc, int grid_level) {
  const int n = rc.n.value_or(1);
  if (src.deterministic) {
    return {src.deterministic->path_at(n), std::nullopt, src.deterministic->natural_level(n)};
  }
  if (!rc.seed) throw ConfigError("--seed is required for stochastic models");
  const StreamKey key{*rc.seed, 0};
  if (src.coupled) {
    auto [xn, x] = sample_coupled(*src.coupled, n, key, grid_level);
    return {xn.path, xn, -1};
  }
  auto sp = sample_path(*src.model, key, grid_level);
  return {sp.path, sp, -1};
}

RefiningSequence sequence_for(const RunConfig& rc, const CadlagPath& path) {
  return make_sequence(parse_partition_kind(rc.partition), path.horizon(), path.jump_times());
}

void prepare_out(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::ofstream f(fs::path(dir) / name, std::ios::binary);
  if (!f) throw Error("cannot write " + (fs::path(dir) / name).string());
  f << content;
}

std::string config_header(const json& config, std::optional<std::uint64_t> seed) {
  std::string s = "# config=" + config.dump() + "\n";
  s += "# seed=" + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
  return s;
}

int cmd_simulate(const RunConfig& rc, std::ostream& out) {
  const Source src = resolve_source(rc.model);
  const int grid_level = rc.grid_level >= 0 ? rc.grid_level : (rc.level >= 0 ? rc.level : 10);
  const Drawn d = draw(src, rc, grid_level);
  const json config = echo(rc, "simulate");
  std::string body;
  if (rc.format == "json") {
    json j;
    j["config"] = config;
    j["seed"] = rc.seed ? json(*rc.seed) : json(nullptr);
    j["path"] = json::parse(path_to_json(d.path));
    body = j.dump() + "\n";
  } else {
    std::ostringstream os;
    os << config_header(config, rc.seed);
    write_path_csv(os, d.path);
    body = os.str();
  }
  if (rc.out_dir.empty()) {
    out << body;
    return kExitOk;
  }
  prepare_out(rc.out_dir);
  write_file(rc.out_dir, rc.format == "json" ? "path.json" : "path.csv", body);
  out << "simulate model=" << src.name << " grid_points=" << d.path.grid().size()
      << " jumps=" << d.path.jumps().size() << " sup=" << format_double(d.path.sup_process())
      << '\n';
  return kExitOk;
}

int cmd_qv(const RunConfig& rc, std::ostream& out) {
  const Source src = resolve_source(rc.model);
  const int grid_level = rc.grid_level >= 0 ? rc.grid_level : std::max(rc.level, 10);
  const Drawn d = draw(src, rc, grid_level);
  const int k = rc.level >= 0 ? rc.level : (d.natural_level >= 0 ? d.natural_level : 10);
  const auto seq = sequence_for(rc, d.path);
  const double value = partial_qv(d.path, seq, k);
  out << format_double(value) << '\n';
  if (!rc.out_dir.empty()) {
    prepare_out(rc.out_dir);
    const auto trace = qv_split(d.path, seq, k);
    std::ostringstream t, p;
    t << config_header(echo(rc, "qv"), rc.seed);
    write_qv_trace_csv(t, trace);
    emit_plot_data(p, trace);
    write_file(rc.out_dir, "qv_trace.csv", t.str());
    write_file(rc.out_dir, "plot_trace.csv", p.str());
  }
  return kExitOk;
}

int cmd_integrate(const RunConfig& rc, std::ostream& out) {
  const Source src = resolve_source(rc.model);
  const int k = rc.level >= 0 ? rc.level : 10;
  const int grid_level = rc.grid_level >= 0 ? rc.grid_level : k;
  const Drawn x = draw(src, rc, grid_level);
  const Source ysrc = resolve_source(rc.integrand.is_null() ? json("brownian") : rc.integrand);
  RunConfig yrc = rc;
  if (rc.seed) yrc.seed = *rc.seed + kIntegrandSeedOffset;
  const Drawn y = draw(ysrc, yrc, grid_level);
  const auto seq = make_sequence(parse_partition_kind(rc.partition), x.path.horizon(),
                                 merge_times(x.path.jump_times(), y.path.jump_times()));
  const auto trace = integral_trace(y.path, x.path, seq, k);
  const double ibp = integration_by_parts_residual(x.path, y.path, seq, k);
  out << "I_k=" << format_double(trace.values.back()) << " ibp_residual=" << format_double(ibp)
      << '\n';
  if (!rc.out_dir.empty()) {
    prepare_out(rc.out_dir);
    std::ostringstream t;
    t << config_header(echo(rc, "integrate"), rc.seed);
    write_integral_trace_csv(t, trace);
    write_file(rc.out_dir, "integral_trace.csv", t.str());
  }
  return kExitOk;
}

int cmd_truncate(const RunConfig& rc, std::ostream& out) {
  const Source src = resolve_source(rc.model);
  if (!src.stochastic()) throw UnsupportedModelError("truncation needs a process model");
  const int k = rc.level >= 0 ? rc.level : 10;
  const int grid_level = rc.grid_level >= 0 ? rc.grid_level : k;
  const Drawn d = draw(src, rc, grid_level);
  const ProcessModel* model = src.model ? &*src.model : &src.coupled->base;
  const auto mode =
      rc.truncation == "plain" ? TruncationMode::Plain : TruncationMode::Compensated;
  const auto seq = sequence_for(rc, d.path);
  const auto report = truncation_report(*d.sampled, model, rc.a_grid, mode, seq, k);
  for (std::size_t i = 0; i < report.a_grid.size(); ++i) {
    out << "a=" << format_double(report.a_grid[i])
        << " sup_dist=" << format_double(report.sup_dist[i])
        << " qv_dist=" << format_double(report.qv_dist[i]) << '\n';
  }
  if (!rc.out_dir.empty()) {
    prepare_out(rc.out_dir);
    std::ostringstream t;
    t << config_header(echo(rc, "truncate"), rc.seed);
    write_truncation_report_csv(t, report);
    write_file(rc.out_dir, "truncation.csv", t.str());
  }
  return kExitOk;
}

int cmd_experiment(const RunConfig& rc, const std::string& scenario, std::ostream& out) {
  json spec_json = rc.experiment.is_null() ? json::object() : rc.experiment;
  if (!spec_json.is_object()) throw ConfigError("'experiment' must be an object");
  if (!scenario.empty()) spec_json["scenario"] = scenario;
  if (!spec_json.contains("scenario")) {
    throw ConfigError("experiment needs a scenario (--scenario or the config 'experiment' object)");
  }
  if (rc.seed) spec_json["seed"] = *rc.seed;
  if (!spec_json.contains("seed")) throw ConfigError("--seed is required for experiments");
  if (rc.replicas > 0) spec_json["replicas"] = rc.replicas;
  if (rc.level >= 0) spec_json["level"] = rc.level;
  if (rc.grid_level >= 0) spec_json["grid_level"] = rc.grid_level;
  const ExperimentSpec spec = experiment_from_json(spec_json.dump());

  const auto report = run_experiment(spec);
  if (rc.format == "json") {
    out << report_summary_json(report) << '\n';
  } else {
    for (const auto& c : report.cells) {
      out << "n=" << c.n;
      if (!std::isnan(c.a)) out << " a=" << format_double(c.a);
      out << " c=" << format_double(c.threshold) << " P=" << format_double(c.probability.estimate)
          << " ci=[" << format_double(c.probability.lo) << ',' << format_double(c.probability.hi)
          << "] mean=" << format_double(c.mean) << " as_tail=" << format_double(c.as_tail_fraction)
          << '\n';
    }
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  }
  if (!rc.out_dir.empty()) {
    prepare_out(rc.out_dir);
    std::ostringstream csv, trend;
    write_report_csv(csv, report);
    emit_plot_data(trend, report, PlotKind::Trend);
    write_file(rc.out_dir, "report.csv", csv.str());
    write_file(rc.out_dir, "summary.json", report_summary_json(report) + "\n");
    write_file(rc.out_dir, "plot_trend.csv", trend.str());
    if (spec.kind == ExperimentKind::DoubleLimit) {
      std::ostringstream matrix;
      emit_plot_data(matrix, report, PlotKind::Matrix);
      write_file(rc.out_dir, "plot_matrix.csv", matrix.str());
    }
  }
  return kExitOk;
}

int cmd_check(const RunConfig& rc, std::ostream& out) {
  const std::size_t cases = rc.replicas > 0 ? rc.replicas : 200;
  const int k = rc.level >= 0 ? rc.level : 12;
  const auto suite = run_identity_suite(cases, k, rc.seed.value_or(1));
  const bool ok = suite.max_ibp_residual <= 1e-10 && suite.max_polarization_residual <= 1e-12 &&
                  suite.triangle_violations == 0 && suite.doubleup_violations == 0;
  out << "cases=" << suite.cases << " level=" << k << '\n'
      << "ibp_residual_max=" << format_double(suite.max_ibp_residual) << '\n'
      << "polarization_residual_max=" << format_double(suite.max_polarization_residual) << '\n'
      << "triangle_violations=" << suite.triangle_violations << '\n'
      << "doubleup_violations=" << suite.doubleup_violations << '\n'
      << (ok ? "check: ok" : "check: FAILED") << '\n';
  return ok ? kExitOk : kExitFailure;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--out", o.out_dir, "Output directory");
  sub->add_option("--level", o.level, "Partition level k");
  sub->add_option("--grid-level", o.grid_level, "Simulation grid level");
  sub->add_option("--replicas", o.replicas, "Replica or case count");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--partition", o.partition, "dyadic or jump-adapted");
  sub->add_option("--model", o.model, "Model preset or counterexample name");
  sub->add_option("--n", o.n, "Sequence index n");
}

}  // namespace

IdentitySuite run_identity_suite(std::size_t cases, int level, std::uint64_t seed) {
  const std::vector<ProcessModel> models = {preset_model("jump_diffusion"),
                                            preset_model("dirichlet"),
                                            preset_model("fixed_schedule"),
                                            preset_model("brownian_drift")};
  std::vector<double> ibp(cases), polar(cases);
  std::vector<int> tri(cases), dbl(cases);
  parallel_for(cases, [&](std::size_t i) {
    std::vector<CadlagPath> p;
    for (std::uint32_t j = 0; j < 4; ++j) {
      const auto& m = models[(i + j) % models.size()];
      const StreamKey key{seed + j * kIntegrandSeedOffset, static_cast<std::uint32_t>(i)};
      p.push_back(sample_path(m, key, level).path);
    }
    const auto seq = i % 2 == 0
                         ? RefiningSequence::dyadic(1.0)
                         : RefiningSequence::jump_adapted(
                               1.0, merge_times(p[0].jump_times(), p[1].jump_times()));
    ibp[i] = integration_by_parts_residual(p[0], p[1], seq, level);
    const double cov = partial_cov(p[0], p[1], seq, level);
    const double sum = partial_qv(p[0] + p[1], seq, level);
    polar[i] = std::abs(2.0 * cov - (sum - partial_qv(p[0], seq, level) -
                                     partial_qv(p[1], seq, level)));
    tri[i] = check_triangle(std::span<const CadlagPath>(p.data(), 3), seq, level).holds ? 0 : 1;
    dbl[i] = check_doubleup(std::span<const CadlagPath>(p.data(), 4), seq, level).holds ? 0 : 1;
  });
  IdentitySuite s;
  s.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    s.max_ibp_residual = std::max(s.max_ibp_residual, ibp[i]);
    s.max_polarization_residual = std::max(s.max_polarization_residual, polar[i]);
    s.triangle_violations += static_cast<std::size_t>(tri[i]);
    s.doubleup_violations += static_cast<std::size_t>(dbl[i]);
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pathqv: pathwise quadratic variation and Föllmer calculus toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Sample one path and write it out");
  auto* qv = app.add_subcommand("qv", "Partial quadratic variation S_k at the horizon");
  auto* integrate = app.add_subcommand("integrate", "Föllmer integral of an integrand against X");
  auto* truncate = app.add_subcommand("truncate", "Jump truncation distances over an a grid");
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo stability experiment");
  auto* check = app.add_subcommand("check", "Exact-identity property sweep");
  for (auto* sub : {simulate, qv, integrate, truncate, experiment, check}) add_common(sub, o);
  integrate->add_option("--integrand", o.integrand, "Integrand model preset (default brownian)");
  truncate->add_option("--a", o.a_grid, "Truncation levels")->delimiter(',');
  truncate->add_option("--mode", o.truncation, "plain or compensated")
      ->check(CLI::IsMember({"plain", "compensated"}));
  experiment->add_option("--scenario", o.scenario, "Scenario preset name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    o.command = app.get_subcommands().front()->get_name();
    const RunConfig rc = resolve(o);
    if (o.command == "simulate") return cmd_simulate(rc, out);
    if (o.command == "qv") return cmd_qv(rc, out);
    if (o.command == "integrate") return cmd_integrate(rc, out);
    if (o.command == "truncate") return cmd_truncate(rc, out);
    if (o.command == "experiment") return cmd_experiment(rc, o.scenario, out);
    return cmd_check(rc, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitSchema;
  } catch (const UnsupportedModelError& e) {
    err << "unsupported model: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace pathqv::cli
