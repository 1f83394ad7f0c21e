#include "pathqv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pathqv/error.hpp"
#include "pathqv/path.hpp"

namespace pathqv {

PartitionKind parse_partition_kind(std::string_view name) {
  if (name == "dyadic") return PartitionKind::Dyadic;
  if (name == "jump-adapted" || name == "jump_adapted") return PartitionKind::JumpAdapted;
  throw ConfigError("unknown partition kind '" + std::string(name) + "'");
}

std::string_view to_string(PartitionKind kind) {
  return kind == PartitionKind::Dyadic ? "dyadic" : "jump-adapted";
}

RefiningSequence::RefiningSequence(double horizon, PartitionKind kind, std::vector<double> extra,
                                   int from_level)
    : horizon_(horizon), kind_(kind), extra_(std::move(extra)), from_level_(from_level) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw_domain("partition horizon must be > 0");
  std::sort(extra_.begin(), extra_.end());
  extra_.erase(std::unique(extra_.begin(), extra_.end()), extra_.end());
  extra_.erase(std::remove_if(extra_.begin(), extra_.end(),
                              [this](double x) { return x <= 0.0 || x >= horizon_; }),
               extra_.end());
  if (from_level_ < 0) throw_domain("from_level must be >= 0");
}

RefiningSequence RefiningSequence::dyadic(double horizon) {
  return RefiningSequence(horizon, PartitionKind::Dyadic, {}, 0);
}

RefiningSequence RefiningSequence::jump_adapted(double horizon, std::vector<double> extra_times,
                                                int from_level) {
  return RefiningSequence(horizon, PartitionKind::JumpAdapted, std::move(extra_times),
                          from_level);
}

void RefiningSequence::check_level(int k) const {
  if (k < 0) throw_domain("partition level must be >= 0");
  if (k > kMaxLevel) {
    throw ResourceLimitError("partition level " + std::to_string(k) + " exceeds the maximum " +
                             std::to_string(kMaxLevel));
  }
}

std::vector<double> RefiningSequence::level(int k) const {
  check_level(k);
  const std::size_t n = std::size_t{1} << k;
  std::vector<double> pts(n + 1);
  for (std::size_t j = 0; j < n; ++j) pts[j] = std::ldexp(static_cast<double>(j), -k) * horizon_;
  pts[n] = horizon_;
  if (kind_ == PartitionKind::JumpAdapted && k >= from_level_ && !extra_.empty()) {
    pts = merge_times(pts, extra_);
  }
  return pts;
}

std::vector<double> RefiningSequence::clip_points(int k, double s) const {
  if (!(s > 0.0)) throw_domain("clip requires s > 0");
  if (s > horizon_) throw_domain("clip point beyond the horizon");
  auto pts = level(k);
  auto it = std::upper_bound(pts.begin(), pts.end(), s);
  pts.erase(it, pts.end());
  if (pts.back() < s) pts.push_back(s);
  return pts;
}

std::vector<Interval> RefiningSequence::clip(int k, double s) const {
  const auto pts = clip_points(k, s);
  std::vector<Interval> out;
  out.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back({pts[i], pts[i + 1]});
  return out;
}

double RefiningSequence::mesh(int k) const {
  const auto pts = level(k);
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) m = std::max(m, pts[i + 1] - pts[i]);
  return m;
}

RefiningSequence make_sequence(PartitionKind kind, double horizon,
                               const std::vector<double>& jump_times) {
  if (kind == PartitionKind::Dyadic) return RefiningSequence::dyadic(horizon);
  return RefiningSequence::jump_adapted(horizon, jump_times);
}

}  // namespace pathqv
