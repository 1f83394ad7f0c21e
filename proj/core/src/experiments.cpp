#include "pathqv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"
#include "pathqv/config.hpp"
#include "pathqv/error.hpp"
#include "pathqv/jumps.hpp"
#include "pathqv/numeric.hpp"
#include "pathqv/path_io.hpp"

namespace pathqv {

namespace {

// Offset applied to the seed so the integrand Y is independent of X.
constexpr std::uint64_t kIntegrandSeedOffset = 0x9E3779B97F4A7C15ULL;

struct Names {
  const char* text;
  int value;
};

template <class E, std::size_t N>
E parse_enum(const std::string& s, const Names (&table)[N], const char* what) {
  for (const auto& entry : table) {
    if (s == entry.text) return static_cast<E>(entry.value);
  }
  throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

template <class E, std::size_t N>
std::string enum_name(E e, const Names (&table)[N]) {
  for (const auto& entry : table) {
    if (static_cast<int>(e) == entry.value) return entry.text;
  }
  return "?";
}

const Names kKinds[] = {{"qv_stability", 0}, {"integrator_stability", 1}, {"double_limit", 2}};
const Names kStats[] = {{"qv_of_difference", 0},
                        {"sup_of_difference", 1},
                        {"integral_sup_difference", 2},
                        {"lp_moment", 3}};
const Names kModes[] = {{"probability", 0}, {"as", 1}, {"lp", 2}};

// Sorted, deduplicated union of the jump times of two paths.
std::vector<double> joint_jump_times(const CadlagPath& a, const CadlagPath& b) {
  const auto ta = a.jump_times();
  const auto tb = b.jump_times();
  return merge_times(ta, tb);
}

struct StatInputs {
  const Transform& fn;
  const CadlagPath& xn;
  const Transform& f;
  const CadlagPath& x;
  const CadlagPath* y;  // null means Y ≡ 1
  PartitionKind partition;
  int level;
  double p;
};

double compute_statistic(Statistic stat, const StatInputs& in) {
  if (stat == Statistic::SupOfDifference) {
    const auto jt = joint_jump_times(in.x, in.xn);
    auto pts = merge_times(merge_times(in.x.grid(), in.xn.grid()), jt);
    const auto vx = in.x.eval_sorted(pts);
    const auto vn = in.xn.eval_sorted(pts);
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      sup = std::max(sup, std::abs(in.fn(vn[i]) - in.f(vx[i])));
    }
    for (double s : jt) {
      sup = std::max(sup, std::abs(in.fn(in.xn.left_limit(s)) - in.f(in.x.left_limit(s))));
    }
    return sup;
  }

  const auto seq = make_sequence(in.partition, in.x.horizon(), joint_jump_times(in.x, in.xn));
  const auto pts = seq.level(in.level);
  const auto vx = in.x.eval_sorted(pts);
  const auto vn = in.xn.eval_sorted(pts);
  std::vector<double> d(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d[i] = in.fn(vn[i]) - in.f(vx[i]);

  if (stat == Statistic::IntegralSupDifference) {
    std::vector<double> yv;
    if (in.y != nullptr) yv = in.y->eval_sorted(pts);
    CompensatedSum run;
    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double yi = in.y != nullptr ? yv[i] : 1.0;
      run += yi * (d[i + 1] - d[i]);
      sup = std::max(sup, std::abs(run.value()));
    }
    return sup;
  }

  CompensatedSum qv;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const double inc = d[i + 1] - d[i];
    qv += inc * inc;
  }
  return stat == Statistic::LpMoment ? std::pow(qv.value(), in.p) : qv.value();
}

ReportCell aggregate(const std::vector<double>& samples, const std::vector<double>& tail_max,
                     int n, double a, double c, double p) {
  ReportCell cell;
  cell.n = n;
  cell.a = a;
  cell.threshold = c;
  const std::size_t hits = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [c](double v) { return v >= c; }));
  cell.probability = wilson_interval(hits, samples.size());
  cell.mean = mean(samples);
  cell.mean_half_width = mean_half_width(samples);
  cell.lp_norm = lp_norm(samples, p);
  cell.l2p_norm = lp_norm(samples, 2.0 * p);
  const std::size_t tail_hits = static_cast<std::size_t>(
      std::count_if(tail_max.begin(), tail_max.end(), [c](double v) { return v >= c; }));
  cell.as_tail_fraction = static_cast<double>(tail_hits) / static_cast<double>(tail_max.size());
  cell.median = median(samples);
  cell.q90 = quantile(samples, 0.9);
  return cell;
}

std::vector<std::string> hypothesis_warnings(const ExperimentSpec& spec) {
  std::vector<std::string> out;
  if (spec.scenario == "custom") {
    out.emplace_back(
        "custom specification: moment and uniform-integrability hypotheses are not verified");
  }
  const auto seq = builtin_sequence(spec.transforms.name, spec.transforms.params);
  const auto check = check_sequence(seq, spec.n_grid, 5.0, 0.05);
  if (!check.decreasing) {
    out.emplace_back("transform sequence: sup |f_n' - f'| on [-5, 5] is not decreasing over the n grid");
  }
  if (spec.kind == ExperimentKind::DoubleLimit) {
    for (double a : spec.a_grid) {
      for (const auto& cp : spec.sequence.base.compound_poisson) {
        if (cp.law.has_atom_at_abs(a)) {
          out.push_back("truncation level " + format_double(a) +
                        " is hit by a jump size with positive probability");
        }
      }
      for (const auto& fj : spec.sequence.base.fixed_jumps) {
        if (fj.law.has_atom_at_abs(a)) {
          out.push_back("truncation level " + format_double(a) +
                        " is hit by a fixed-time jump size with positive probability");
        }
      }
    }
  }
  return out;
}

ExperimentReport run_impl(const ExperimentSpec& spec) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.scenario = spec.scenario;
  report.kind = spec.kind;
  report.statistic = spec.statistic;
  report.mode = spec.mode;
  report.p = spec.p;
  report.n_grid = spec.n_grid;
  report.a_grid = spec.a_grid;
  report.thresholds = spec.thresholds;
  report.warnings = hypothesis_warnings(spec);
  report.config_json = experiment_to_json(spec);
  report.seed = spec.seed;
  report.replicas = spec.replicas;
  report.level = spec.level;

  const bool truncated = spec.kind == ExperimentKind::DoubleLimit;
  const std::size_t na = truncated ? spec.a_grid.size() : 1;
  const std::size_t nn = spec.n_grid.size();
  const auto tseq = builtin_sequence(spec.transforms.name, spec.transforms.params);
  const Transform f = tseq.limit();
  std::vector<Transform> fns;
  fns.reserve(nn);
  for (int n : spec.n_grid) fns.push_back(tseq.at(n));

  report.samples.assign(na * nn, std::vector<double>(spec.replicas, 0.0));
  parallel_for(spec.replicas, [&](std::size_t r) {
    const StreamKey key{spec.seed, static_cast<std::uint32_t>(r)};
    const SampledPath x = sample_path(spec.sequence.base, key, spec.grid_level);
    std::optional<CadlagPath> y;
    if (spec.integrand) {
      const StreamKey ykey{spec.seed + kIntegrandSeedOffset, static_cast<std::uint32_t>(r)};
      y = sample_path(*spec.integrand, ykey, spec.grid_level).path;
    }
    for (std::size_t j = 0; j < nn; ++j) {
      const SampledPath xn = apply_coupling(spec.sequence, spec.n_grid[j], x, key, spec.grid_level);
      for (std::size_t ai = 0; ai < na; ++ai) {
        const CadlagPath xna = truncated ? truncate_plain(xn.path, spec.a_grid[ai]) : xn.path;
        const StatInputs in{fns[j], xna, f, x.path, y ? &*y : nullptr,
                            spec.partition, spec.level, spec.p};
        report.samples[ai * nn + j][r] = compute_statistic(spec.statistic, in);
      }
    }
  });

  for (std::size_t ai = 0; ai < na; ++ai) {
    // Per replica, running maximum over n' >= n for the tail surrogate.
    std::vector<std::vector<double>> tail(nn, std::vector<double>(spec.replicas, 0.0));
    for (std::size_t r = 0; r < spec.replicas; ++r) {
      double m = 0.0;
      for (std::size_t j = nn; j-- > 0;) {
        m = std::max(m, report.samples[ai * nn + j][r]);
        tail[j][r] = m;
      }
    }
    const double a = truncated ? spec.a_grid[ai] : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < nn; ++j) {
      for (double c : spec.thresholds) {
        report.cells.push_back(
            aggregate(report.samples[ai * nn + j], tail[j], spec.n_grid[j], a, c, spec.p));
      }
    }
  }

  if (truncated) {
    for (std::size_t ai = 0; ai < na; ++ai) {
      report.limit_over_n.push_back(report.cell(ai, nn - 1).probability.estimate);
    }
    // a_min is the smallest truncation level, wherever it sits in the grid.
    const auto amin = static_cast<std::size_t>(
        std::min_element(spec.a_grid.begin(), spec.a_grid.end()) - spec.a_grid.begin());
    for (std::size_t j = 0; j < nn; ++j) {
      report.limit_over_a.push_back(report.cell(amin, j).probability.estimate);
    }
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ExperimentSpec base_spec(const std::string& name) {
  ExperimentSpec s;
  s.scenario = name;
  return s;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& s) {
  return parse_enum<ExperimentKind>(s, kKinds, "experiment kind");
}
Statistic parse_statistic(const std::string& s) {
  return parse_enum<Statistic>(s, kStats, "statistic");
}
ConvergenceMode parse_convergence_mode(const std::string& s) {
  if (s == "almost_sure" || s == "a.s.") return ConvergenceMode::AlmostSure;
  return parse_enum<ConvergenceMode>(s, kModes, "convergence mode");
}
std::string to_string(ExperimentKind k) { return enum_name(k, kKinds); }
std::string to_string(Statistic s) { return enum_name(s, kStats); }
std::string to_string(ConvergenceMode m) { return enum_name(m, kModes); }

void ExperimentSpec::validate() const {
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (int n : n_grid) {
    if (n < 1) throw ConfigError("n_grid entries must be >= 1");
  }
  if (thresholds.empty()) throw ConfigError("thresholds must not be empty");
  for (double c : thresholds) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("thresholds must be positive");
  }
  if (replicas < 1) throw ConfigError("replicas must be >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("p must be >= 1");
  if (level < 0 || level > RefiningSequence::kMaxLevel) {
    throw ResourceLimitError("level must lie in [0, " +
                             std::to_string(RefiningSequence::kMaxLevel) + "]");
  }
  if (grid_level < 0 || grid_level > kMaxGridLevel) {
    throw ResourceLimitError("grid_level must lie in [0, " + std::to_string(kMaxGridLevel) + "]");
  }
  const bool path_stat =
      statistic == Statistic::QvOfDifference || statistic == Statistic::LpMoment;
  switch (kind) {
    case ExperimentKind::QvStability:
      if (!path_stat) throw ConfigError("qv_stability takes qv_of_difference or lp_moment");
      break;
    case ExperimentKind::IntegratorStability:
      if (path_stat) {
        throw ConfigError("integrator_stability takes sup_of_difference or integral_sup_difference");
      }
      break;
    case ExperimentKind::DoubleLimit:
      if (path_stat) {
        throw ConfigError("double_limit takes sup_of_difference or integral_sup_difference");
      }
      if (a_grid.empty()) throw ConfigError("double_limit needs a nonempty a_grid");
      for (double a : a_grid) {
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("a_grid entries must be positive");
      }
      break;
  }
  sequence.base.validate();
  if (integrand) integrand->validate();
  builtin_sequence(transforms.name, transforms.params);
}

const ReportCell& ExperimentReport::cell(std::size_t a_index, std::size_t n_index,
                                         std::size_t c_index) const {
  const std::size_t na = std::max<std::size_t>(1, a_grid.size());
  if (a_index >= na || n_index >= n_grid.size() || c_index >= thresholds.size()) {
    throw DomainError("report cell index out of range");
  }
  return cells[(a_index * n_grid.size() + n_index) * thresholds.size() + c_index];
}

ExperimentReport run_qv_stability(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::QvStability) throw ConfigError("spec kind is not qv_stability");
  return run_impl(spec);
}

ExperimentReport run_integrator_stability(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::IntegratorStability) {
    throw ConfigError("spec kind is not integrator_stability");
  }
  return run_impl(spec);
}

ExperimentReport run_double_limit(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentKind::DoubleLimit) throw ConfigError("spec kind is not double_limit");
  return run_impl(spec);
}

ExperimentReport run_experiment(const ExperimentSpec& spec) { return run_impl(spec); }

ExperimentSpec scenario_preset(const std::string& name) {
  ExperimentSpec s = base_spec(name);
  if (name == "x2_noise" || name == "x2_noise_integrator") {
    s.sequence.base = preset_model("x2_base");
    s.sequence.rule = CouplingRule::AddNoise;
    s.transforms.name = "polynomial_family";
    s.level = 14;
    s.grid_level = 14;
    s.replicas = 500;
    if (name == "x2_noise_integrator") {
      s.kind = ExperimentKind::IntegratorStability;
      s.statistic = Statistic::IntegralSupDifference;
      s.integrand = preset_model("brownian");
    }
  } else if (name == "abs_cp_drift") {
    ProcessModel m;
    m.name = "cp_drift_away";
    m.x0 = 1.5;
    m.drift.rate = 1.0;
    m.compound_poisson.push_back({2.0, JumpLaw::uniform(-0.5, 0.5)});
    s.sequence.base = m;
    s.sequence.rule = CouplingRule::AddNoise;
    s.transforms.name = "mollified_abs";
    s.level = 12;
    s.grid_level = 12;
    s.replicas = 200;
  } else if (name == "noise_dominated") {
    s.sequence.base = preset_model("brownian_drift");
    s.sequence.rule = CouplingRule::AddNoise;
    s.transforms.name = "constant_sin";
    s.kind = ExperimentKind::IntegratorStability;
    s.statistic = Statistic::IntegralSupDifference;
    s.integrand = preset_model("brownian");
    s.level = 12;
    s.grid_level = 12;
    s.replicas = 200;
  } else if (name == "poisson_scale") {
    s.sequence = *counterexample("poisson_scale").sequence;
    s.kind = ExperimentKind::DoubleLimit;
    s.statistic = Statistic::IntegralSupDifference;
    s.a_grid = {1.0, 0.5, 0.25, 0.1};
    s.n_grid = {2, 4, 8, 16, 32, 64};
    s.partition = PartitionKind::JumpAdapted;
    s.replicas = 500;
  } else if (name == "v2_noise") {
    ProcessModel m;
    m.name = "v2_base";
    m.sigma = 0.5;
    m.compound_poisson.push_back({2.0, JumpLaw::uniform(-1.0, 1.0)});
    s.sequence.base = m;
    s.sequence.rule = CouplingRule::AddNoise;
    s.kind = ExperimentKind::DoubleLimit;
    s.statistic = Statistic::IntegralSupDifference;
    s.a_grid = {0.5, 0.25, 0.1, 0.05};
    s.replicas = 300;
  } else if (name == "identity") {
    s.sequence.base = preset_model("brownian");
    s.replicas = 20;
    s.level = 8;
    s.grid_level = 8;
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return s;
}

std::vector<std::string> scenario_names() {
  return {"x2_noise", "x2_noise_integrator", "abs_cp_drift", "noise_dominated",
          "poisson_scale", "v2_noise", "identity"};
}

double hnorm_j(const PathDecomposition& decomp) {
  const double x0 = std::abs(decomp.total.eval(0.0));
  const auto& mv = decomp.mart.cont_values();
  CompensatedSum qv;
  for (std::size_t i = 0; i + 1 < mv.size(); ++i) {
    const double inc = mv[i + 1] - mv[i];
    qv += inc * inc;
  }
  qv += decomp.mart.sum_squared_jumps();
  const auto& av = decomp.fv.cont_values();
  CompensatedSum tv;
  for (std::size_t i = 0; i + 1 < av.size(); ++i) tv += std::abs(av[i + 1] - av[i]);
  for (const auto& j : decomp.fv.jumps()) tv += std::abs(j.size);
  return x0 + std::sqrt(qv.value()) + tv.value();
}

double lp_norm(const std::vector<double>& values, double p) {
  if (values.empty()) throw DomainError("lp_norm of an empty sample");
  if (!(p > 0.0)) throw DomainError("lp_norm needs p > 0");
  CompensatedSum acc;
  for (double v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc.value() / static_cast<double>(values.size()), 1.0 / p);
}

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
  os << "# config=" << report.config_json << '\n';
  os << "# seed=" << report.seed << '\n';
  for (const auto& w : report.warnings) os << "# warning=" << w << '\n';
  os << "scenario,kind,statistic,mode,a,n,threshold,probability,ci_lo,ci_hi,mean,"
        "mean_half_width,lp_norm,l2p_norm,as_tail_fraction,median,q90\n";
  for (const auto& c : report.cells) {
    os << report.scenario << ',' << to_string(report.kind) << ',' << to_string(report.statistic)
       << ',' << to_string(report.mode) << ',' << (std::isnan(c.a) ? std::string() : format_double(c.a))
       << ',' << c.n << ',' << format_double(c.threshold) << ','
       << format_double(c.probability.estimate) << ',' << format_double(c.probability.lo) << ','
       << format_double(c.probability.hi) << ',' << format_double(c.mean) << ','
       << format_double(c.mean_half_width) << ',' << format_double(c.lp_norm) << ','
       << format_double(c.l2p_norm) << ',' << format_double(c.as_tail_fraction) << ','
       << format_double(c.median) << ',' << format_double(c.q90) << '\n';
  }
}

std::string report_summary_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["scenario"] = report.scenario;
  j["kind"] = to_string(report.kind);
  j["statistic"] = to_string(report.statistic);
  j["mode"] = to_string(report.mode);
  j["p"] = report.p;
  j["config"] = nlohmann::json::parse(report.config_json);
  j["seed"] = report.seed;
  j["replicas"] = report.replicas;
  j["level"] = report.level;
  j["runtime_seconds"] = report.runtime_seconds;
  j["warnings"] = report.warnings;
  j["ci_method"] = "wilson";
  j["n_grid"] = report.n_grid;
  j["a_grid"] = report.a_grid;
  j["thresholds"] = report.thresholds;
  if (!report.limit_over_n.empty()) {
    j["limit_over_n"] = report.limit_over_n;
    j["limit_over_a"] = report.limit_over_a;
  }
  auto cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cj{{"n", c.n},
                      {"threshold", c.threshold},
                      {"probability", c.probability.estimate},
                      {"ci", {c.probability.lo, c.probability.hi}},
                      {"mean", c.mean},
                      {"mean_half_width", c.mean_half_width},
                      {"lp_norm", c.lp_norm},
                      {"l2p_norm", c.l2p_norm},
                      {"as_tail_fraction", c.as_tail_fraction},
                      {"median", c.median},
                      {"q90", c.q90}};
    cj["a"] = std::isnan(c.a) ? nlohmann::json(nullptr) : nlohmann::json(c.a);
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j.dump(2);
}

}  // namespace pathqv
