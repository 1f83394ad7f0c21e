#include "pathqv/qv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pathqv/error.hpp"
#include "pathqv/numeric.hpp"
#include "pathqv/path_io.hpp"

namespace pathqv {

namespace {

void require_common_horizon(const CadlagPath& path, const RefiningSequence& seq) {
  if (path.horizon() != seq.horizon()) {
    throw ConfigError("path horizon does not match the partition horizon");
  }
}

constexpr std::size_t kExactExtremaLimit = 4097;

}  // namespace

std::vector<double> increments(const CadlagPath& path, std::span<const double> points) {
  const auto v = path.eval_sorted(points);
  std::vector<double> d(v.size() > 0 ? v.size() - 1 : 0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = v[i + 1] - v[i];
  return d;
}

double partial_qv(const CadlagPath& path, const RefiningSequence& seq, int k, double s) {
  require_common_horizon(path, seq);
  const auto pts = seq.clip_points(k, s);
  CompensatedSum acc;
  for (double d : increments(path, pts)) acc += d * d;
  return acc.value();
}

double partial_qv(const CadlagPath& path, const RefiningSequence& seq, int k) {
  return partial_qv(path, seq, k, seq.horizon());
}

double partial_cov(const CadlagPath& x, const CadlagPath& y, const RefiningSequence& seq, int k,
                   double s) {
  require_common_horizon(x, seq);
  require_common_horizon(y, seq);
  const auto pts = seq.clip_points(k, s);
  const auto dx = increments(x, pts);
  const auto dy = increments(y, pts);
  CompensatedSum acc;
  for (std::size_t i = 0; i < dx.size(); ++i) acc += dx[i] * dy[i];
  return acc.value();
}

double partial_cov(const CadlagPath& x, const CadlagPath& y, const RefiningSequence& seq, int k) {
  return partial_cov(x, y, seq, k, seq.horizon());
}

QVTrace qv_split(const CadlagPath& path, const RefiningSequence& seq, int k) {
  require_common_horizon(path, seq);
  QVTrace tr;
  tr.level = k;
  tr.times = seq.level(k);
  const auto d = increments(path, tr.times);
  const auto& jumps = path.jumps();
  tr.values.resize(tr.times.size());
  tr.jump_part.resize(tr.times.size());
  tr.cont_part.resize(tr.times.size());
  CompensatedSum acc;
  CompensatedSum jacc;
  std::size_t jn = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (i > 0) acc += d[i - 1] * d[i - 1];
    while (jn < jumps.size() && jumps[jn].time <= tr.times[i]) {
      jacc += jumps[jn].size * jumps[jn].size;
      ++jn;
    }
    tr.values[i] = acc.value();
    tr.jump_part[i] = jacc.value();
    tr.cont_part[i] = tr.values[i] - tr.jump_part[i];
  }
  return tr;
}

namespace {

CadlagPath sum_paths(std::span<const CadlagPath> paths) {
  if (paths.empty()) throw_domain("inequality check needs at least one path");
  CadlagPath total = paths[0];
  for (std::size_t i = 1; i < paths.size(); ++i) total = total + paths[i];
  return total;
}

bool within(double lhs, double rhs) {
  return lhs <= rhs + kInequalityTolerance * std::max(std::abs(rhs), 1e-300);
}

}  // namespace

InequalityReport check_triangle(std::span<const CadlagPath> paths, const RefiningSequence& seq,
                                int k) {
  const CadlagPath total = sum_paths(paths);
  InequalityReport r;
  r.lhs = partial_qv(total, seq, k);
  double root_sum = 0.0;
  for (const auto& p : paths) root_sum += std::sqrt(partial_qv(p, seq, k));
  r.rhs = root_sum * root_sum;
  r.holds = within(r.lhs, r.rhs);
  return r;
}

InequalityReport check_doubleup(std::span<const CadlagPath> paths, const RefiningSequence& seq,
                                int k) {
  const CadlagPath total = sum_paths(paths);
  InequalityReport r;
  r.lhs = partial_qv(total, seq, k);
  CompensatedSum acc;
  for (const auto& p : paths) acc += partial_qv(p, seq, k);
  r.rhs = std::ldexp(acc.value(), static_cast<int>(paths.size()) - 1);
  r.holds = within(r.lhs, r.rhs);
  return r;
}

DpResult p_variation(std::span<const double> values, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw_domain("p must lie in [1, 2]");
  DpResult out;
  if (values.size() < 2) return out;
  if (p == 1.0) {
    CompensatedSum acc;
    for (std::size_t i = 1; i < values.size(); ++i) acc += std::abs(values[i] - values[i - 1]);
    out.value = acc.value();
    return out;
  }
  // For p >= 1 an optimal sub-partition can be chosen among the endpoints and
  // the turning points, since merging a monotone run never lowers |Δ|^p sums.
  std::vector<double> flat;
  flat.reserve(values.size());
  for (double x : values) {
    if (flat.empty() || x != flat.back()) flat.push_back(x);
  }
  std::vector<double> ext;
  ext.push_back(flat.front());
  for (std::size_t i = 1; i + 1 < flat.size(); ++i) {
    if ((flat[i] - flat[i - 1]) * (flat[i + 1] - flat[i]) < 0.0) ext.push_back(flat[i]);
  }
  if (flat.size() > 1) ext.push_back(flat.back());
  const std::size_t m = ext.size();
  if (m <= kExactExtremaLimit) {
    std::vector<double> best(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) {
      double b = 0.0;
      for (std::size_t i = 0; i < j; ++i) {
        b = std::max(b, best[i] + std::pow(std::abs(ext[j] - ext[i]), p));
      }
      best[j] = b;
    }
    out.value = *std::max_element(best.begin(), best.end());
    return out;
  }
  // Greedy pair merging: drop an adjacent extremum pair (b, c) between a and d
  // whenever |d - a|^p beats the three-step sum. Yields a lower bound.
  out.exact = false;
  auto pw = [p](double x) { return std::pow(std::abs(x), p); };
  bool changed = true;
  while (changed && ext.size() >= 4) {
    changed = false;
    std::vector<double> next;
    next.reserve(ext.size());
    std::size_t i = 0;
    while (i < ext.size()) {
      next.push_back(ext[i]);
      if (i + 3 < ext.size()) {
        const double a = ext[i];
        const double b = ext[i + 1];
        const double c = ext[i + 2];
        const double d = ext[i + 3];
        if (pw(d - a) > pw(b - a) + pw(c - b) + pw(d - c)) {
          i += 3;
          changed = true;
          continue;
        }
      }
      ++i;
    }
    ext.swap(next);
  }
  CompensatedSum acc;
  for (std::size_t i = 1; i < ext.size(); ++i) acc += pw(ext[i] - ext[i - 1]);
  out.value = acc.value();
  return out;
}

DpResult dp_statistic(const CadlagPath& path, const RefiningSequence& seq, int k, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw_domain("p must lie in [1, 2]");
  if (path.has_jumps()) throw_domain("the p-variation statistic needs a continuous path");
  require_common_horizon(path, seq);
  const auto pts = seq.level(k);
  const auto v = path.eval_sorted(pts);
  return p_variation(v, p);
}

void write_qv_trace_csv(std::ostream& os, const QVTrace& trace) {
  os << "s,S_k,jump_part,cont_part\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << format_double(trace.times[i]) << ',' << format_double(trace.values[i]) << ','
       << format_double(trace.jump_part[i]) << ',' << format_double(trace.cont_part[i]) << '\n';
  }
}

}  // namespace pathqv
