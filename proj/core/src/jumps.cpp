#include "pathqv/jumps.hpp"

#include <cmath>
#include <ostream>

#include "pathqv/error.hpp"
#include "pathqv/path_io.hpp"
#include "pathqv/qv.hpp"

namespace pathqv {

CadlagPath truncate_plain(const CadlagPath& x, double a) {
  if (!(a > 0.0)) throw_domain("truncation level must be > 0");
  return x.filter_jumps([a](const JumpEvent& j) { return std::abs(j.size) >= a; });
}

CadlagPath truncate_compensated(const SampledPath& x, const ProcessModel* model, double a) {
  if (model == nullptr) throw UnsupportedModelError("compensated truncation needs model data");
  if (!model->has_closed_form_compensator()) {
    throw UnsupportedModelError("model '" + model->name + "' has no closed-form compensator");
  }
  if (!(a > 0.0 && a < 1.0)) throw_domain("compensated truncation needs 0 < a < 1");
  const CadlagPath kept =
      x.path.filter_jumps([a](const JumpEvent& j) { return std::abs(j.size) >= a; });
  const double drift =
      model->compensator_rate([](double v) { return v; }, Band{0.0, a, true, false});
  if (drift == 0.0) return kept;
  const double t = kept.horizon();
  return kept + CadlagPath::linear(t, 0.0, drift * t);
}

TruncationReport truncation_report(const SampledPath& x, const ProcessModel* model,
                                   const std::vector<double>& a_grid, TruncationMode mode,
                                   const RefiningSequence& seq, int k) {
  TruncationReport r;
  r.mode = mode;
  r.a_grid = a_grid;
  for (double a : a_grid) {
    const CadlagPath tr = mode == TruncationMode::Plain ? truncate_plain(x.path, a)
                                                        : truncate_compensated(x, model, a);
    const CadlagPath diff = tr - x.path;
    r.sup_dist.push_back(diff.sup_process());
    r.qv_dist.push_back(partial_qv(diff, seq, k));
  }
  return r;
}

std::vector<TroubleEstimate> trouble_set_probe(const ProcessModel& model,
                                               const std::vector<double>& a_candidates,
                                               std::size_t replicas, std::uint64_t seed) {
  if (replicas == 0) throw_domain("probe needs at least one replica");
  // Jump sizes do not depend on the grid, so the coarsest grid suffices.
  std::vector<std::vector<char>> hit(replicas, std::vector<char>(a_candidates.size(), 0));
  parallel_for(replicas, [&](std::size_t r) {
    const SampledPath sp = sample_path(model, {seed, static_cast<std::uint32_t>(r)}, 0);
    for (std::size_t i = 0; i < a_candidates.size(); ++i) {
      for (const auto& j : sp.path.jumps()) {
        if (std::abs(j.size) == a_candidates[i]) {
          hit[r][i] = 1;
          break;
        }
      }
    }
  });
  std::vector<TroubleEstimate> out;
  for (std::size_t i = 0; i < a_candidates.size(); ++i) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicas; ++r) hits += hit[r][i] != 0;
    out.push_back({a_candidates[i], hits, replicas, wilson_interval(hits, replicas)});
  }
  return out;
}

double small_jump_statistic(const CadlagPath& x, double a, VMode mode) {
  if (mode == VMode::V2) {
    double total = 0.0;
    for (const auto& j : x.jumps()) {
      if (std::abs(j.size) <= a) total += std::abs(j.size);
    }
    return total;
  }
  double running = 0.0;
  double sup = 0.0;
  for (const auto& j : x.jumps()) {
    if (std::abs(j.size) <= a) {
      running += j.size;
      sup = std::max(sup, std::abs(running));
    }
  }
  return sup;
}

std::vector<VProbeCell> v_condition_probe(const CoupledSequence& seq, VMode mode,
                                          const std::vector<double>& a_grid,
                                          const std::vector<int>& n_grid, double c,
                                          std::size_t replicas, std::uint64_t seed) {
  if (replicas == 0) throw_domain("probe needs at least one replica");
  const std::size_t cells = a_grid.size() * n_grid.size();
  std::vector<std::vector<char>> exceed(replicas, std::vector<char>(cells, 0));
  parallel_for(replicas, [&](std::size_t r) {
    const StreamKey key{seed, static_cast<std::uint32_t>(r)};
    const SampledPath x = sample_path(seq.base, key, 0);
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      const SampledPath xn = apply_coupling(seq, n_grid[j], x, key, 0);
      for (std::size_t i = 0; i < a_grid.size(); ++i) {
        exceed[r][i * n_grid.size() + j] = small_jump_statistic(xn.path, a_grid[i], mode) >= c;
      }
    }
  });
  std::vector<VProbeCell> out;
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < replicas; ++r) hits += exceed[r][i * n_grid.size() + j] != 0;
      out.push_back({a_grid[i], n_grid[j], wilson_interval(hits, replicas)});
    }
  }
  return out;
}

namespace {

CadlagPath oscillator_path(int n) {
  if (n < 0 || n > 20) throw_domain("oscillator index must lie in [0, 20]");
  const double h = std::pow(2.0, -(n + 1) / 2.0);
  const int level = n + 1;
  const std::size_t cells = std::size_t{1} << level;
  std::vector<JumpEvent> jumps;
  jumps.reserve(cells - 1);
  for (std::size_t j = 1; j < cells; ++j) {
    jumps.push_back({std::ldexp(static_cast<double>(j), -level), j % 2 == 1 ? -h : h, true});
  }
  return CadlagPath::step(1.0, std::move(jumps), h);
}

}  // namespace

Counterexample counterexample(const std::string& name, int layers) {
  Counterexample ce;
  ce.name = name;
  if (name == "poisson_scale") {
    CoupledSequence seq;
    seq.base.name = "poisson";
    seq.base.compound_poisson.push_back({1.0, JumpLaw::point_mass(1.0)});
    seq.rule = CouplingRule::ScaleJumps;
    ce.sequence = seq;
    return ce;
  }
  if (name == "layered_poisson") {
    if (layers < 1) throw ConfigError("layered_poisson needs at least one layer");
    CoupledSequence seq;
    seq.base.name = "layered_poisson";
    for (int k = 1; k <= layers; ++k) {
      seq.base.compound_poisson.push_back(
          {1.0, JumpLaw::point_mass(1.0 / (static_cast<double>(k) * k))});
    }
    seq.rule = CouplingRule::ScaleJumps;
    ce.sequence = seq;
    return ce;
  }
  if (name == "oscillator") {
    ce.path_at = oscillator_path;
    ce.natural_level = [](int n) { return n + 1; };
    return ce;
  }
  throw ConfigError("unknown counterexample '" + name + "'");
}

void write_truncation_report_csv(std::ostream& os, const TruncationReport& report) {
  os << "mode,a,sup_dist,qv_dist\n";
  const char* mode = report.mode == TruncationMode::Plain ? "plain" : "compensated";
  for (std::size_t i = 0; i < report.a_grid.size(); ++i) {
    os << mode << ',' << format_double(report.a_grid[i]) << ','
       << format_double(report.sup_dist[i]) << ',' << format_double(report.qv_dist[i]) << '\n';
  }
}

}  // namespace pathqv
