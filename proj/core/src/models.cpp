#include "pathqv/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pathqv/error.hpp"
#include "pathqv/fbm.hpp"

namespace pathqv {

double DriftSpec::integral(double s) const {
  double v = rate * s;
  if (amplitude != 0.0) {
    const double w = 2.0 * std::numbers::pi * frequency;
    v += amplitude * (1.0 - std::cos(w * s)) / w;
  }
  return v;
}

bool ProcessModel::has_closed_form_compensator() const {
  for (const auto& c : compound_poisson) {
    if (!c.law.has_closed_form()) return false;
  }
  for (const auto& f : fixed_jumps) {
    if (!f.law.has_closed_form()) return false;
  }
  return true;
}

double ProcessModel::compensator_rate(const std::function<double(double)>& g,
                                      const Band& band) const {
  double total = 0.0;
  for (const auto& c : compound_poisson) {
    if (c.intensity > 0.0) total += c.intensity * c.law.integrate(g, band);
  }
  return total;
}

void ProcessModel::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("model horizon must be > 0");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  for (const auto& c : compound_poisson) {
    if (!(c.intensity >= 0.0) || !std::isfinite(c.intensity)) {
      throw ConfigError("compound Poisson intensity must be >= 0");
    }
  }
  for (std::size_t i = 0; i < fixed_jumps.size(); ++i) {
    const double t = fixed_jumps[i].time;
    if (!(t > 0.0 && t <= horizon)) throw ConfigError("fixed jump time must lie in (0, horizon]");
    if (i > 0 && !(t > fixed_jumps[i - 1].time)) {
      throw ConfigError("fixed jump times must be strictly increasing");
    }
  }
  if (fbm && !(fbm->hurst > 0.5 && fbm->hurst < 1.0)) {
    throw ConfigError("fBm Hurst index must lie in (0.5, 1) for a zero-QV component");
  }
}

std::vector<double> dyadic_grid(double horizon, int level) {
  if (level < 0) throw_domain("grid level must be >= 0");
  if (level > kMaxGridLevel) {
    throw ResourceLimitError("grid level " + std::to_string(level) + " exceeds the supported " +
                             std::to_string(kMaxGridLevel));
  }
  const std::size_t n = std::size_t{1} << level;
  std::vector<double> g(n + 1);
  for (std::size_t j = 0; j < n; ++j) g[j] = std::ldexp(static_cast<double>(j), -level) * horizon;
  g[n] = horizon;
  return g;
}

namespace {

std::vector<double> brownian_values(std::size_t steps, double horizon, RngStream rng) {
  std::normal_distribution<double> nd;
  const double sd = std::sqrt(horizon / static_cast<double>(steps));
  std::vector<double> w(steps + 1);
  w[0] = 0.0;
  for (std::size_t j = 0; j < steps; ++j) w[j + 1] = w[j] + sd * nd(rng);
  return w;
}

// Sorts by time and merges exactly coincident times; zero sums are dropped.
std::vector<JumpEvent> normalize_jumps(std::vector<JumpEvent> jumps) {
  std::sort(jumps.begin(), jumps.end(),
            [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  std::vector<JumpEvent> out;
  for (const auto& j : jumps) {
    if (!out.empty() && out.back().time == j.time) {
      out.back().size += j.size;
      out.back().fixed_time = out.back().fixed_time || j.fixed_time;
      if (out.back().size == 0.0) out.pop_back();
    } else if (j.size != 0.0) {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<JumpEvent> sample_jumps(const ProcessModel& model, StreamKey key) {
  std::vector<JumpEvent> jumps;
  for (std::size_t c = 0; c < model.compound_poisson.size(); ++c) {
    const auto& spec = model.compound_poisson[c];
    RngStream rng(key, static_cast<std::uint32_t>(StreamId::CompoundPoisson) +
                           static_cast<std::uint32_t>(c));
    if (spec.intensity == 0.0) continue;
    std::poisson_distribution<long> pd(spec.intensity * model.horizon);
    const long count = pd(rng);
    for (long i = 0; i < count; ++i) {
      double t = 0.0;
      while (t == 0.0) t = model.horizon * (1.0 - rng.uniform());  // (0, horizon]
      jumps.push_back({t, spec.law.sample(rng), false});
    }
  }
  RngStream fixed_rng(key, StreamId::FixedJumps);
  for (const auto& f : model.fixed_jumps) {
    const double size = f.law.sample(fixed_rng);
    jumps.push_back({f.time, size, true});
  }
  return normalize_jumps(std::move(jumps));
}

}  // namespace

SampledPath sample_path(const ProcessModel& model, StreamKey key, int grid_level) {
  model.validate();
  auto grid = dyadic_grid(model.horizon, grid_level);
  const std::size_t steps = grid.size() - 1;
  const double t = model.horizon;

  std::vector<double> mart(grid.size(), 0.0);
  if (model.sigma > 0.0) {
    const auto w = brownian_values(steps, t, RngStream(key, StreamId::Brownian));
    for (std::size_t j = 0; j < grid.size(); ++j) mart[j] = model.sigma * w[j];
  }
  std::vector<double> fv(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) fv[j] = model.x0 + model.drift.integral(grid[j]);
  std::vector<double> zero(grid.size(), 0.0);
  if (model.fbm) {
    RngStream rng(key, StreamId::Fbm);
    const auto b = sample_fbm(model.fbm->hurst, steps, t, rng);
    for (std::size_t j = 0; j < grid.size(); ++j) zero[j] = model.fbm->scale * b[j];
  }

  CadlagPath m(t, grid, std::move(mart));
  CadlagPath a(t, grid, std::move(fv), sample_jumps(model, key));
  CadlagPath c(t, std::move(grid), std::move(zero));
  CadlagPath total = (m + a) + c;
  return {total, PathDecomposition{std::move(total), std::move(m), std::move(a), std::move(c)}};
}

CouplingRule parse_coupling_rule(const std::string& name) {
  if (name == "identity") return CouplingRule::Identity;
  if (name == "scale_jumps") return CouplingRule::ScaleJumps;
  if (name == "add_noise") return CouplingRule::AddNoise;
  if (name == "add_fbm") return CouplingRule::AddFbm;
  if (name == "mollify_jumps") return CouplingRule::MollifyJumps;
  throw ConfigError("unknown coupling rule '" + name + "'");
}

std::string to_string(CouplingRule rule) {
  switch (rule) {
    case CouplingRule::Identity: return "identity";
    case CouplingRule::ScaleJumps: return "scale_jumps";
    case CouplingRule::AddNoise: return "add_noise";
    case CouplingRule::AddFbm: return "add_fbm";
    case CouplingRule::MollifyJumps: return "mollify_jumps";
  }
  return "identity";
}

namespace {

SampledPath rebuild(CadlagPath mart, CadlagPath fv, CadlagPath zero) {
  CadlagPath total = (mart + fv) + zero;
  return {total, PathDecomposition{std::move(total), std::move(mart), std::move(fv),
                                   std::move(zero)}};
}

CadlagPath mollified(const CadlagPath& fv, int n) {
  // Continuous ramps replace the jumps: the ramp for a jump J at u rises
  // linearly on [max(0, u - δ), u] and reaches J exactly at u.
  const double t = fv.horizon();
  const double delta = t / (16.0 * n);
  std::vector<double> extra;
  for (const auto& j : fv.jumps()) {
    extra.push_back(std::max(0.0, j.time - delta));
    extra.push_back(j.time);
  }
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
  const auto grid = merge_times(fv.grid(), extra);
  auto values = fv.continuous_sorted(grid);
  for (const auto& j : fv.jumps()) {
    const double start = std::max(0.0, j.time - delta);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = grid[i];
      if (s >= j.time) {
        values[i] += j.size;
      } else if (s > start) {
        values[i] += j.size * (s - start) / (j.time - start);
      }
    }
  }
  return CadlagPath(t, grid, std::move(values));
}

}  // namespace

SampledPath apply_coupling(const CoupledSequence& seq, int n, const SampledPath& x, StreamKey key,
                           int grid_level) {
  if (n == CoupledSequence::kInfinity || seq.rule == CouplingRule::Identity) return x;
  if (n < 1) throw_domain("sequence index must be >= 1");
  const auto& d = x.decomposition;
  const double t = d.total.horizon();
  switch (seq.rule) {
    case CouplingRule::ScaleJumps: {
      auto jumps = d.fv.jumps();
      const double factor = 1.0 - 1.0 / n;
      std::vector<JumpEvent> scaled;
      for (auto j : jumps) {
        j.size *= factor;
        if (j.size != 0.0) scaled.push_back(j);
      }
      return rebuild(d.mart, d.fv.with_jumps(std::move(scaled)), d.zero_qv);
    }
    case CouplingRule::AddNoise: {
      auto grid = dyadic_grid(t, grid_level);
      auto w = brownian_values(grid.size() - 1, t, RngStream(key, StreamId::Noise));
      const double c = seq.noise_scale / n;
      for (double& v : w) v *= c;
      return rebuild(d.mart + CadlagPath(t, std::move(grid), std::move(w)), d.fv, d.zero_qv);
    }
    case CouplingRule::AddFbm: {
      auto grid = dyadic_grid(t, grid_level);
      RngStream rng(key, StreamId::NoiseFbm);
      auto b = sample_fbm(seq.noise_hurst, grid.size() - 1, t, rng);
      const double c = seq.noise_scale / n;
      for (double& v : b) v *= c;
      return rebuild(d.mart, d.fv, d.zero_qv + CadlagPath(t, std::move(grid), std::move(b)));
    }
    case CouplingRule::MollifyJumps:
      return rebuild(d.mart, mollified(d.fv, n), d.zero_qv);
    case CouplingRule::Identity: break;
  }
  return x;
}

std::pair<SampledPath, SampledPath> sample_coupled(const CoupledSequence& seq, int n,
                                                   StreamKey key, int grid_level) {
  SampledPath x = sample_path(seq.base, key, grid_level);
  SampledPath xn = apply_coupling(seq, n, x, key, grid_level);
  return {std::move(xn), std::move(x)};
}

double fixed_jump_variation(const CadlagPath& path) {
  double total = 0.0;
  for (const auto& j : path.jumps()) {
    if (j.fixed_time) total += std::abs(j.size);
  }
  return total;
}

}  // namespace pathqv
