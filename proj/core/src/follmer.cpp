#include "pathqv/follmer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pathqv/error.hpp"
#include "pathqv/numeric.hpp"
#include "pathqv/path_io.hpp"
#include "pathqv/qv.hpp"

namespace pathqv {

namespace {

void require_horizon(const CadlagPath& p, const RefiningSequence& seq) {
  if (p.horizon() != seq.horizon()) throw ConfigError("path horizon does not match the partition");
}

}  // namespace

double foellmer_integral(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k, double s) {
  require_horizon(integrand, seq);
  require_horizon(integrator, seq);
  const auto pts = seq.clip_points(k, s);
  const auto y = integrand.eval_sorted(pts);
  const auto x = integrator.eval_sorted(pts);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += y[i] * (x[i + 1] - x[i]);
  return acc.value();
}

double foellmer_integral(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k) {
  return foellmer_integral(integrand, integrator, seq, k, seq.horizon());
}

IntegralTrace integral_trace(const CadlagPath& integrand, const CadlagPath& integrator,
                             const RefiningSequence& seq, int k) {
  require_horizon(integrand, seq);
  require_horizon(integrator, seq);
  IntegralTrace tr;
  tr.level = k;
  tr.times = seq.level(k);
  const auto y = integrand.eval_sorted(tr.times);
  const auto x = integrator.eval_sorted(tr.times);
  tr.values.resize(tr.times.size());
  CompensatedSum acc;
  tr.values[0] = 0.0;
  for (std::size_t i = 0; i + 1 < tr.times.size(); ++i) {
    acc += y[i] * (x[i + 1] - x[i]);
    tr.values[i + 1] = acc.value();
  }
  for (const auto& j : integrator.jumps()) {
    auto it = std::lower_bound(tr.times.begin(), tr.times.end(), j.time);
    const auto right = static_cast<std::size_t>(it - tr.times.begin());
    const std::size_t left = right - 1;
    JumpCheck c;
    c.time = j.time;
    c.increment = y[left] * (x[right] - x[left]);
    c.target = integrand.left_limit(j.time) * j.size;
    c.error = std::abs(c.increment - c.target);
    tr.jump_checks.push_back(c);
  }
  return tr;
}

CadlagPath integral_path(const std::function<double(double)>& integrand_at,
                         const std::function<double(double)>& integrand_left,
                         const CadlagPath& integrator, const RefiningSequence& seq, int k) {
  require_horizon(integrator, seq);
  auto pts = seq.level(k);
  const auto xc = integrator.continuous_sorted(pts);
  std::vector<double> values(pts.size());
  CompensatedSum acc;
  values[0] = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    acc += integrand_at(pts[i]) * (xc[i + 1] - xc[i]);
    values[i + 1] = acc.value();
  }
  std::vector<JumpEvent> jumps;
  for (const auto& j : integrator.jumps()) {
    const double size = integrand_left(j.time) * j.size;
    if (size != 0.0) jumps.push_back({j.time, size, j.fixed_time});
  }
  return CadlagPath(seq.horizon(), std::move(pts), std::move(values), std::move(jumps));
}

CadlagPath integral_path(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k) {
  require_horizon(integrand, seq);
  return integral_path([&](double t) { return integrand.eval(t); },
                       [&](double t) { return integrand.left_limit(t); }, integrator, seq, k);
}

double integration_by_parts_residual(const CadlagPath& x, const CadlagPath& y,
                                     const RefiningSequence& seq, int k) {
  require_horizon(x, seq);
  require_horizon(y, seq);
  const auto pts = seq.level(k);
  const auto xv = x.eval_sorted(pts);
  const auto yv = y.eval_sorted(pts);
  CompensatedSum ixy;
  CompensatedSum iyx;
  CompensatedSum cov;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double dx = xv[i + 1] - xv[i];
    const double dy = yv[i + 1] - yv[i];
    ixy += xv[i] * dy;
    iyx += yv[i] * dx;
    cov += dx * dy;
  }
  CompensatedSum total;
  total += ixy.value();
  total += iyx.value();
  total += cov.value();
  total += -(xv.back() * yv.back());
  total += xv.front() * yv.front();
  return std::abs(total.value());
}

double ito_formula_residual(const Transform& f, const CadlagPath& x, const RefiningSequence& seq,
                            int k) {
  if (!f.has_second()) {
    throw ConfigError("Ito formula residual needs a second derivative for '" + f.name() + "'");
  }
  require_horizon(x, seq);
  const QVTrace tr = qv_split(x, seq, k);
  const auto xv = x.eval_sorted(tr.times);
  CompensatedSum acc;
  acc += f(xv.back());
  acc += -f(xv.front());
  for (const auto& j : x.jumps()) {
    const double before = x.left_limit(j.time);
    const double after = before + j.size;
    acc += -(f(after) - f(before) - j.size * f.d(before));
  }
  for (std::size_t i = 0; i + 1 < tr.times.size(); ++i) {
    acc += -f.d(xv[i]) * (xv[i + 1] - xv[i]);
    acc += -0.5 * f.d2(xv[i]) * (tr.cont_part[i + 1] - tr.cont_part[i]);
  }
  return std::abs(acc.value());
}

TransformQV transform_qv_check(const Transform& f, const CadlagPath& x,
                               const RefiningSequence& seq, int k) {
  require_horizon(x, seq);
  TransformQV out;
  out.lhs = partial_qv(transform_path(f, x), seq, k);
  const QVTrace tr = qv_split(x, seq, k);
  const auto xv = x.eval_sorted(tr.times);
  CompensatedSum rhs;
  for (std::size_t i = 0; i + 1 < tr.times.size(); ++i) {
    const double g = f.d(xv[i]);
    rhs += g * g * (tr.cont_part[i + 1] - tr.cont_part[i]);
  }
  for (const auto& j : x.jumps()) {
    const double before = x.left_limit(j.time);
    const double df = f(before + j.size) - f(before);
    rhs += df * df;
  }
  out.rhs = rhs.value();
  return out;
}

namespace {

constexpr double kTransformTolerance = 1e-6;
constexpr int kMaxSubdivisions = 4096;

int subdivisions(const Transform& f, double xa, double xb) {
  if (!f.has_second() || xa == xb) return 1;
  const double curv = std::max({std::abs(f.d2(xa)), std::abs(f.d2(xb)),
                                std::abs(f.d2(0.5 * (xa + xb)))});
  if (curv == 0.0) return 1;
  const double scale = std::max(1.0, std::min(std::abs(f(xa)), std::abs(f(xb))));
  // Linear interpolation error over a step h in x is at most curv·h²/8.
  const double h_max = std::sqrt(8.0 * kTransformTolerance * scale / curv);
  const double m = std::ceil(std::abs(xb - xa) / h_max);
  return static_cast<int>(std::clamp(m, 1.0, static_cast<double>(kMaxSubdivisions)));
}

}  // namespace

CadlagPath transform_path(const Transform& f, const CadlagPath& x) {
  if (f.name() == "identity") return x;
  const auto pts = merge_times(x.grid(), x.jump_times());
  const auto xv = x.eval_sorted(pts);

  std::vector<JumpEvent> fjumps;
  for (const auto& j : x.jumps()) {
    const double before = x.left_limit(j.time);
    const double size = f(before + j.size) - f(before);
    if (size != 0.0) fjumps.push_back({j.time, size, j.fixed_time});
  }

  std::vector<double> grid;
  std::vector<double> values;
  grid.reserve(pts.size());
  values.reserve(pts.size());
  std::size_t jn = 0;
  double cum = 0.0;
  auto advance_jumps = [&](double s) {
    while (jn < fjumps.size() && fjumps[jn].time <= s) cum += fjumps[jn++].size;
  };
  std::vector<double> inner;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    advance_jumps(pts[i]);
    grid.push_back(pts[i]);
    values.push_back(f(xv[i]) - cum);
    if (i + 1 == pts.size()) break;
    const double sa = pts[i];
    const double sb = pts[i + 1];
    const double xa = xv[i];
    const double xb = xv[i + 1] - x.jump_at(sb);
    inner.clear();
    for (double c : f.kinks()) {
      if ((xa < c && c < xb) || (xb < c && c < xa)) {
        inner.push_back(sa + (c - xa) / (xb - xa) * (sb - sa));
      }
    }
    const int m = subdivisions(f, xa, xb);
    for (int q = 1; q < m; ++q) inner.push_back(sa + (sb - sa) * q / m);
    std::sort(inner.begin(), inner.end());
    for (double s : inner) {
      if (!(s > grid.back() && s < sb)) continue;
      const double w = (s - sa) / (sb - sa);
      grid.push_back(s);
      values.push_back(f(xa + w * (xb - xa)) - cum);
    }
  }
  return CadlagPath(x.horizon(), std::move(grid), std::move(values), std::move(fjumps));
}

void write_integral_trace_csv(std::ostream& os, const IntegralTrace& trace) {
  os << "s,I_k\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    os << format_double(trace.times[i]) << ',' << format_double(trace.values[i]) << '\n';
  }
  os << "\njump_time,increment,target,jump_check\n";
  for (const auto& c : trace.jump_checks) {
    os << format_double(c.time) << ',' << format_double(c.increment) << ','
       << format_double(c.target) << ',' << format_double(c.error) << '\n';
  }
}

}  // namespace pathqv
