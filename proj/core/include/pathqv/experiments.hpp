#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathqv/models.hpp"
#include "pathqv/partition.hpp"
#include "pathqv/path.hpp"
#include "pathqv/stats.hpp"
#include "pathqv/transform.hpp"

namespace pathqv {

enum class ExperimentKind { QvStability, IntegratorStability, DoubleLimit };
enum class Statistic { QvOfDifference, SupOfDifference, IntegralSupDifference, LpMoment };
enum class ConvergenceMode { Probability, AlmostSure, Lp };

ExperimentKind parse_experiment_kind(const std::string& s);
Statistic parse_statistic(const std::string& s);
ConvergenceMode parse_convergence_mode(const std::string& s);
std::string to_string(ExperimentKind k);
std::string to_string(Statistic s);
std::string to_string(ConvergenceMode m);

struct TransformSpec {
  std::string name = "constant_identity";
  std::map<std::string, double> params;
};

struct ExperimentSpec {
  std::string scenario = "custom";
  ExperimentKind kind = ExperimentKind::QvStability;
  Statistic statistic = Statistic::QvOfDifference;
  ConvergenceMode mode = ConvergenceMode::Probability;
  double p = 1.0;
  CoupledSequence sequence;
  TransformSpec transforms;
  /// Integrand Y for the integral statistics; absent means Y ≡ 1.
  std::optional<ProcessModel> integrand;
  std::vector<double> thresholds{0.1};
  std::vector<int> n_grid{2, 4, 8, 16, 32};
  /// Truncation levels (double-limit experiments only).
  std::vector<double> a_grid;
  int level = 10;
  int grid_level = 10;
  PartitionKind partition = PartitionKind::Dyadic;
  std::size_t replicas = 100;
  std::uint64_t seed = 1;

  /// Throws ConfigError on empty grids, zero replicas, or mismatched kinds.
  void validate() const;
};

/// One (n, a, c) cell aggregated over replicas.
struct ReportCell {
  int n = 0;
  /// Truncation level; NaN outside double-limit experiments.
  double a = 0.0;
  double threshold = 0.0;
  ProportionCI probability;
  double mean = 0.0;
  double mean_half_width = 0.0;
  /// (mean S^p)^{1/p} and (mean S^{2p})^{1/(2p)}.
  double lp_norm = 0.0;
  double l2p_norm = 0.0;
  /// Fraction of replicas whose statistic exceeds c at some n' >= n.
  double as_tail_fraction = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

struct ExperimentReport {
  std::string scenario;
  ExperimentKind kind = ExperimentKind::QvStability;
  Statistic statistic = Statistic::QvOfDifference;
  ConvergenceMode mode = ConvergenceMode::Probability;
  double p = 1.0;
  std::vector<int> n_grid;
  std::vector<double> a_grid;
  std::vector<double> thresholds;
  std::vector<ReportCell> cells;
  /// samples[cell_index(a, n)][replica]; cells ordered a-major, then n.
  std::vector<std::vector<double>> samples;
  std::vector<std::string> warnings;
  std::string config_json;
  std::uint64_t seed = 0;
  std::size_t replicas = 0;
  int level = 0;
  double runtime_seconds = 0.0;

  /// Double limit: P at (a, n_max) per a, and P at (a_min, n) per n, for the first threshold.
  std::vector<double> limit_over_n;
  std::vector<double> limit_over_a;

  [[nodiscard]] const ReportCell& cell(std::size_t a_index, std::size_t n_index,
                                       std::size_t c_index = 0) const;
};

ExperimentReport run_qv_stability(const ExperimentSpec& spec);
ExperimentReport run_integrator_stability(const ExperimentSpec& spec);
ExperimentReport run_double_limit(const ExperimentSpec& spec);
/// Dispatches on spec.kind.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Named scenario bundles: x2_noise, abs_cp_drift, noise_dominated,
/// poisson_scale, v2_noise, identity.
ExperimentSpec scenario_preset(const std::string& name);
std::vector<std::string> scenario_names();

/// |X_0| + sqrt(QV of M on its grid) + total variation of A.
double hnorm_j(const PathDecomposition& decomp);
/// (mean |v|^p)^{1/p}.
double lp_norm(const std::vector<double>& values, double p);

/// One row per cell; leading '#' lines carry the config echo and seed.
void write_report_csv(std::ostream& os, const ExperimentReport& report);
/// Summary with config echo, seeds, levels, warnings, runtime.
std::string report_summary_json(const ExperimentReport& report);

}  // namespace pathqv
