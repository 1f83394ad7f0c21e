#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pathqv/partition.hpp"
#include "pathqv/path.hpp"

namespace pathqv {

/// Running partial sums S_k(X)_s at every point s of D_k.
struct QVTrace {
  int level = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> jump_part;
  /// values - jump_part, stored raw (may dip below 0 at coarse levels).
  std::vector<double> cont_part;
};

/// Outcome of an inequality check.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Relative slack used by the inequality predicates.
inline constexpr double kInequalityTolerance = 1e-9;

/// Increments X_{p[i+1]} - X_{p[i]} over consecutive points.
std::vector<double> increments(const CadlagPath& path, std::span<const double> points);

/// S_k(X)_s = Σ (X_{t_{i+1}∧s} - X_{t_i})² over t_i ∈ D_k, t_i <= s.
double partial_qv(const CadlagPath& path, const RefiningSequence& seq, int k, double s);
double partial_qv(const CadlagPath& path, const RefiningSequence& seq, int k);

/// S_k(X, Y)_s, the increment-product analogue.
double partial_cov(const CadlagPath& x, const CadlagPath& y, const RefiningSequence& seq, int k,
                   double s);
double partial_cov(const CadlagPath& x, const CadlagPath& y, const RefiningSequence& seq, int k);

QVTrace qv_split(const CadlagPath& path, const RefiningSequence& seq, int k);

/// [Σ X^i] <= (Σ [X^i]^{1/2})² evaluated with S_k at the horizon.
InequalityReport check_triangle(std::span<const CadlagPath> paths, const RefiningSequence& seq,
                                int k);
/// [Σ X^i] <= 2^{n-1} Σ [X^i].
InequalityReport check_doubleup(std::span<const CadlagPath> paths, const RefiningSequence& seq,
                                int k);

struct DpResult {
  double value = 0.0;
  /// False when the value is only a lower bound (very long extremum chains).
  bool exact = true;
};

/// max over sub-partitions {s_i} ⊆ D_k of Σ |C_{s_i} - C_{s_{i-1}}|^p for a
/// continuous path and p in [1, 2].
DpResult dp_statistic(const CadlagPath& path, const RefiningSequence& seq, int k, double p);

/// Same statistic over an explicit sample sequence.
DpResult p_variation(std::span<const double> values, double p);

/// Columns: s, S_k, jump_part, cont_part.
void write_qv_trace_csv(std::ostream& os, const QVTrace& trace);

}  // namespace pathqv
