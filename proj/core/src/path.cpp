#include "pathqv/path.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathqv/error.hpp"

namespace pathqv {

namespace {

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

CadlagPath::CadlagPath(double horizon, std::vector<double> grid, std::vector<double> cont_values,
                       std::vector<JumpEvent> jumps)
    : horizon_(horizon),
      grid_(std::move(grid)),
      values_(std::move(cont_values)),
      jumps_(std::move(jumps)) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw_domain("path horizon must be positive and finite, got " + describe(horizon_));
  }
  if (grid_.size() < 2 || grid_.front() != 0.0 || grid_.back() != horizon_) {
    throw_domain("path grid must start at 0 and end at the horizon");
  }
  if (grid_.size() != values_.size()) {
    throw_domain("path grid and value lists differ in length");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw_domain("path grid must be strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw_domain("path values must be finite");
  }
  double prev = 0.0;
  for (const auto& j : jumps_) {
    if (!(j.time > prev) || j.time > horizon_) {
      throw_domain("jump times must be strictly increasing in (0, horizon], got " +
                   describe(j.time));
    }
    if (j.size == 0.0 || !std::isfinite(j.size)) {
      throw_domain("jump sizes must be nonzero and finite");
    }
    prev = j.time;
  }
  build_prefix();
}

CadlagPath::CadlagPath(Unchecked, double horizon, std::vector<double> grid,
                       std::vector<double> values, std::vector<JumpEvent> jumps)
    : horizon_(horizon),
      grid_(std::move(grid)),
      values_(std::move(values)),
      jumps_(std::move(jumps)) {
  build_prefix();
}

void CadlagPath::build_prefix() {
  cum_jumps_.resize(jumps_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    acc += jumps_[i].size;
    cum_jumps_[i] = acc;
  }
}

CadlagPath CadlagPath::constant(double horizon, double value) {
  return CadlagPath(horizon, {0.0, horizon}, {value, value});
}

CadlagPath CadlagPath::linear(double horizon, double start, double end) {
  return CadlagPath(horizon, {0.0, horizon}, {start, end});
}

CadlagPath CadlagPath::step(double horizon, std::vector<JumpEvent> jumps, double start) {
  return CadlagPath(horizon, {0.0, horizon}, {start, start}, std::move(jumps));
}

CadlagPath CadlagPath::sampled(double horizon, std::vector<double> grid,
                               const std::function<double(double)>& fn,
                               std::vector<JumpEvent> jumps) {
  std::vector<double> values(grid.size());
  std::transform(grid.begin(), grid.end(), values.begin(), fn);
  return CadlagPath(horizon, std::move(grid), std::move(values), std::move(jumps));
}

std::vector<double> CadlagPath::jump_times() const {
  std::vector<double> out(jumps_.size());
  std::transform(jumps_.begin(), jumps_.end(), out.begin(),
                 [](const JumpEvent& j) { return j.time; });
  return out;
}

void CadlagPath::require_in_domain(double s) const {
  if (!(s >= 0.0 && s <= horizon_)) {
    throw_domain("time " + describe(s) + " outside [0, " + describe(horizon_) + "]");
  }
}

std::size_t CadlagPath::segment_of(double s) const noexcept {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
  std::size_t idx = static_cast<std::size_t>(it - grid_.begin());
  return idx == 0 ? 0 : idx - 1;
}

double CadlagPath::interpolate(std::size_t seg, double s) const noexcept {
  if (grid_[seg] == s || seg + 1 >= grid_.size()) return values_[seg];
  const double w = (s - grid_[seg]) / (grid_[seg + 1] - grid_[seg]);
  return values_[seg] + w * (values_[seg + 1] - values_[seg]);
}

double CadlagPath::continuous_at(double s) const {
  require_in_domain(s);
  return interpolate(segment_of(s), s);
}

double CadlagPath::jump_sum(double s) const noexcept {
  auto it = std::upper_bound(jumps_.begin(), jumps_.end(), s,
                             [](double t, const JumpEvent& j) { return t < j.time; });
  const auto n = static_cast<std::size_t>(it - jumps_.begin());
  return n == 0 ? 0.0 : cum_jumps_[n - 1];
}

double CadlagPath::jump_sum_before(double s) const noexcept {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), s,
                             [](const JumpEvent& j, double t) { return j.time < t; });
  const auto n = static_cast<std::size_t>(it - jumps_.begin());
  return n == 0 ? 0.0 : cum_jumps_[n - 1];
}

double CadlagPath::eval(double s) const {
  require_in_domain(s);
  return interpolate(segment_of(s), s) + jump_sum(s);
}

double CadlagPath::left_limit(double s) const {
  if (!(s > 0.0)) throw_domain("left limit requires s > 0, got " + describe(s));
  require_in_domain(s);
  return interpolate(segment_of(s), s) + jump_sum_before(s);
}

double CadlagPath::jump_at(double s) const noexcept {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), s,
                             [](const JumpEvent& j, double t) { return j.time < t; });
  return (it != jumps_.end() && it->time == s) ? it->size : 0.0;
}

std::vector<double> CadlagPath::continuous_sorted(std::span<const double> times) const {
  std::vector<double> out(times.size());
  std::size_t seg = 0;
  const std::size_t last = grid_.size() - 1;
  double prev = -1.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = times[i];
    if (s < prev) throw_domain("eval_sorted requires nondecreasing times");
    require_in_domain(s);
    prev = s;
    while (seg < last && grid_[seg + 1] <= s) ++seg;
    out[i] = interpolate(seg, s);
  }
  return out;
}

std::vector<double> CadlagPath::eval_sorted(std::span<const double> times) const {
  std::vector<double> out = continuous_sorted(times);
  std::size_t jn = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    while (jn < jumps_.size() && jumps_[jn].time <= times[i]) ++jn;
    if (jn > 0) out[i] += cum_jumps_[jn - 1];
  }
  return out;
}

double CadlagPath::sup_process(double s) const {
  require_in_domain(s);
  double best = 0.0;
  std::size_t jn = 0;
  // Between consecutive events (grid points, jump times) the path is affine,
  // so extremes sit at events: right values everywhere, left limits at jumps.
  auto consider_jumps_up_to = [&](double t, bool inclusive) {
    while (jn < jumps_.size() && (jumps_[jn].time < t || (inclusive && jumps_[jn].time == t))) {
      const double u = jumps_[jn].time;
      const double c = interpolate(segment_of(u), u);
      const double before = jn == 0 ? 0.0 : cum_jumps_[jn - 1];
      best = std::max({best, std::abs(c + before), std::abs(c + cum_jumps_[jn])});
      ++jn;
    }
  };
  for (std::size_t g = 0; g < grid_.size() && grid_[g] <= s; ++g) {
    consider_jumps_up_to(grid_[g], true);
    const double j = jn == 0 ? 0.0 : cum_jumps_[jn - 1];
    best = std::max(best, std::abs(values_[g] + j));
  }
  consider_jumps_up_to(s, true);
  best = std::max(best, std::abs(eval(s)));
  return best;
}

CadlagPath CadlagPath::stopped(double T, bool open) const {
  require_in_domain(T);
  if (T == horizon_ && !open) return *this;
  const double frozen = interpolate(segment_of(T), T);
  std::vector<double> grid;
  std::vector<double> values;
  for (std::size_t g = 0; g < grid_.size() && grid_[g] < T; ++g) {
    grid.push_back(grid_[g]);
    values.push_back(values_[g]);
  }
  grid.push_back(T);
  values.push_back(frozen);
  if (T < horizon_) {
    grid.push_back(horizon_);
    values.push_back(frozen);
  }
  if (T == 0.0) {
    grid = {0.0, horizon_};
    values = {frozen, frozen};
  }
  std::vector<JumpEvent> jumps;
  for (const auto& j : jumps_) {
    if (j.time < T || (!open && j.time == T)) jumps.push_back(j);
  }
  return CadlagPath(Unchecked{}, horizon_, std::move(grid), std::move(values), std::move(jumps));
}

CadlagPath CadlagPath::continuous_component() const {
  return CadlagPath(Unchecked{}, horizon_, grid_, values_, {});
}

CadlagPath CadlagPath::jump_component() const {
  return CadlagPath(Unchecked{}, horizon_, {0.0, horizon_}, {0.0, 0.0}, jumps_);
}

CadlagPath CadlagPath::with_jumps(std::vector<JumpEvent> jumps) const {
  return CadlagPath(horizon_, grid_, values_, std::move(jumps));
}

CadlagPath CadlagPath::filter_jumps(const std::function<bool(const JumpEvent&)>& keep) const {
  std::vector<JumpEvent> kept;
  std::copy_if(jumps_.begin(), jumps_.end(), std::back_inserter(kept), keep);
  return CadlagPath(Unchecked{}, horizon_, grid_, values_, std::move(kept));
}

double CadlagPath::sum_squared_jumps() const noexcept {
  double acc = 0.0;
  for (const auto& j : jumps_) acc += j.size * j.size;
  return acc;
}

std::vector<double> merge_times(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<JumpEvent> combine_jumps(const std::vector<JumpEvent>& a, double ca,
                                     const std::vector<JumpEvent>& b, double cb) {
  std::vector<JumpEvent> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&out](double t, double size, bool fixed) {
    if (size != 0.0) out.push_back({t, size, fixed});
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].time < b[j].time)) {
      push(a[i].time, ca * a[i].size, a[i].fixed_time);
      ++i;
    } else if (i == a.size() || b[j].time < a[i].time) {
      push(b[j].time, cb * b[j].size, b[j].fixed_time);
      ++j;
    } else {
      push(a[i].time, ca * a[i].size + cb * b[j].size, a[i].fixed_time || b[j].fixed_time);
      ++i;
      ++j;
    }
  }
  return out;
}

CadlagPath combine(const CadlagPath& a, double ca, const CadlagPath& b, double cb) {
  if (a.horizon() != b.horizon()) {
    throw ConfigError("cannot combine paths with different horizons");
  }
  std::vector<double> grid;
  std::vector<double> values;
  if (a.grid() == b.grid()) {
    grid = a.grid();
    values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[i] = ca * a.cont_values()[i] + cb * b.cont_values()[i];
    }
  } else {
    grid = merge_times(a.grid(), b.grid());
    const auto va = a.continuous_sorted(grid);
    const auto vb = b.continuous_sorted(grid);
    values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = ca * va[i] + cb * vb[i];
  }
  return CadlagPath(a.horizon(), std::move(grid), std::move(values),
                    combine_jumps(a.jumps(), ca, b.jumps(), cb));
}

}  // namespace

CadlagPath operator+(const CadlagPath& a, const CadlagPath& b) { return combine(a, 1.0, b, 1.0); }

CadlagPath operator-(const CadlagPath& a, const CadlagPath& b) { return combine(a, 1.0, b, -1.0); }

CadlagPath operator*(double c, const CadlagPath& p) {
  std::vector<double> values(p.values_.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = c * p.values_[i];
  std::vector<JumpEvent> jumps;
  if (c != 0.0) {
    jumps = p.jumps_;
    for (auto& j : jumps) j.size *= c;
  }
  return CadlagPath(CadlagPath::Unchecked{}, p.horizon_, p.grid_, std::move(values),
                    std::move(jumps));
}

double max_abs_difference(const CadlagPath& a, const CadlagPath& b) {
  if (a.horizon() != b.horizon()) throw ConfigError("horizon mismatch");
  auto times = merge_times(a.grid(), b.grid());
  times = merge_times(times, a.jump_times());
  times = merge_times(times, b.jump_times());
  const auto va = a.eval_sorted(times);
  const auto vb = b.eval_sorted(times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    worst = std::max(worst, std::abs(va[i] - vb[i]));
    if (times[i] > 0.0) {
      const double la = va[i] - a.jump_at(times[i]);
      const double lb = vb[i] - b.jump_at(times[i]);
      worst = std::max(worst, std::abs(la - lb));
    }
  }
  return worst;
}

void PathDecomposition::validate() const {
  const double t = total.horizon();
  if (mart.horizon() != t || fv.horizon() != t || zero_qv.horizon() != t) {
    throw_domain("decomposition components have different horizons");
  }
  if (zero_qv.has_jumps()) throw_domain("zero-QV component must be continuous");
}

double PathDecomposition::residual() const {
  return max_abs_difference(total, mart + fv + zero_qv);
}

}  // namespace pathqv
