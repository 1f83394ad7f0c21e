#pragma once

#include <string_view>
#include <vector>

namespace pathqv {

enum class PartitionKind { Dyadic, JumpAdapted };

PartitionKind parse_partition_kind(std::string_view name);
std::string_view to_string(PartitionKind kind);

/// One increment [left, right] of a clipped partition.
struct Interval {
  double left;
  double right;
};

/// Nested partitions D_0 ⊆ D_1 ⊆ ... of [0, t].
///
/// Dyadic points j·2^{-k}·t are materialized with ldexp so the same point is
/// bit-identical at every level it appears in, and nesting holds exactly.
/// The jump-adapted variant adds a fixed set of extra times (typically the
/// jump times of a path) from `from_level` on.
class RefiningSequence {
 public:
  static constexpr int kMaxLevel = 24;

  static RefiningSequence dyadic(double horizon);
  static RefiningSequence jump_adapted(double horizon, std::vector<double> extra_times,
                                       int from_level = 0);

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] PartitionKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::vector<double>& extra_times() const noexcept { return extra_; }

  /// D_k as an increasing list; contains 0 and the horizon.
  [[nodiscard]] std::vector<double> level(int k) const;
  /// Points t_i <= s of D_k followed by s itself (no duplicates). Consecutive
  /// pairs are the clipped increments.
  [[nodiscard]] std::vector<double> clip_points(int k, double s) const;
  /// Clipped increments [t_i, min(t_{i+1}, s)], zero-length ones dropped.
  [[nodiscard]] std::vector<Interval> clip(int k, double s) const;
  [[nodiscard]] double mesh(int k) const;

 private:
  RefiningSequence(double horizon, PartitionKind kind, std::vector<double> extra, int from_level);
  void check_level(int k) const;

  double horizon_;
  PartitionKind kind_;
  std::vector<double> extra_;
  int from_level_;
};

/// The sequence named by `kind`; for jump-adapted, `jump_times` are injected.
RefiningSequence make_sequence(PartitionKind kind, double horizon,
                               const std::vector<double>& jump_times);

}  // namespace pathqv
