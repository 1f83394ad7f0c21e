#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pathqv/models.hpp"
#include "pathqv/partition.hpp"
#include "pathqv/path.hpp"
#include "pathqv/stats.hpp"

namespace pathqv {

/// X(a): keeps jumps with |ΔX| >= a, continuous part untouched.
CadlagPath truncate_plain(const CadlagPath& x, double a);

/// X̂(a) for a < 1: removes the random-time jumps with |ΔX| < a together with
/// their compensator, i.e. X - Σ_{|ΔX|<a} ΔX + s·Σ_c λ_c E[J 1{|J|<a}].
/// Fixed-time jumps below a are dropped without compensation.
CadlagPath truncate_compensated(const SampledPath& x, const ProcessModel* model, double a);

enum class TruncationMode { Plain, Compensated };

struct TruncationReport {
  TruncationMode mode = TruncationMode::Plain;
  std::vector<double> a_grid;
  /// (X(a) - X)*_t
  std::vector<double> sup_dist;
  /// S_k(X(a) - X)_t
  std::vector<double> qv_dist;
};

TruncationReport truncation_report(const SampledPath& x, const ProcessModel* model,
                                   const std::vector<double>& a_grid, TruncationMode mode,
                                   const RefiningSequence& seq, int k);

struct TroubleEstimate {
  double a = 0.0;
  std::size_t hits = 0;
  std::size_t replicas = 0;
  ProportionCI probability;
};

/// Empirical P(∃ s <= t : |ΔX_s| = a), exact floating-point comparison.
std::vector<TroubleEstimate> trouble_set_probe(const ProcessModel& model,
                                               const std::vector<double>& a_candidates,
                                               std::size_t replicas, std::uint64_t seed);

enum class VMode { V1, V2 };

struct VProbeCell {
  double a = 0.0;
  int n = 0;
  ProportionCI probability;
};

/// V2: P(Σ |ΔX^n| 1{|ΔX^n| <= a} >= c). V1: P(sup_s |Σ_{u<=s} ΔX^n 1{|ΔX^n| <= a}| >= c).
/// Rows follow a_grid, columns n_grid.
std::vector<VProbeCell> v_condition_probe(const CoupledSequence& seq, VMode mode,
                                          const std::vector<double>& a_grid,
                                          const std::vector<int>& n_grid, double c,
                                          std::size_t replicas, std::uint64_t seed);

/// Small-jump statistic used by the probes.
double small_jump_statistic(const CadlagPath& x, double a, VMode mode);

/// Named counterexamples: stochastic ones carry a coupled sequence, the
/// deterministic oscillator a path generator with its natural partition level.
struct Counterexample {
  std::string name;
  std::optional<CoupledSequence> sequence;
  std::function<CadlagPath(int)> path_at;
  std::function<int(int)> natural_level;
};

inline constexpr int kDefaultLayers = 70;

/// poisson_scale: X Poisson(intensity 1), X^n = (1 - 1/n)X.
/// layered_poisson: X = Σ_{k<=layers} k^{-2} N_k, X^n = (1 - 1/n)X.
/// oscillator: X ≡ 0 and X^n alternating h, 0 on steps 2^{-(n+1)}, h = 2^{-(n+1)/2}.
Counterexample counterexample(const std::string& name, int layers = kDefaultLayers);

void write_truncation_report_csv(std::ostream& os, const TruncationReport& report);

}  // namespace pathqv
