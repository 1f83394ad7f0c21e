#include "pathqv/ya.hpp"

#include <algorithm>
#include <cmath>

#include "pathqv/error.hpp"
#include "pathqv/follmer.hpp"
#include "pathqv/numeric.hpp"
#include "pathqv/qv.hpp"

namespace pathqv {

namespace {

double jump_gap(const CadlagPath& a, const CadlagPath& b) {
  const auto times = merge_times(a.jump_times(), b.jump_times());
  double worst = 0.0;
  for (double s : times) worst = std::max(worst, std::abs(a.jump_at(s) - b.jump_at(s)));
  return worst;
}

}  // namespace

YaDecomposition build_ya(const Transform& f, const SampledPath& x, const ProcessModel* model,
                         double a, const RefiningSequence& seq, int k) {
  if (model == nullptr) throw UnsupportedModelError("Y^a needs a model with compensator data");
  if (!model->has_closed_form_compensator()) {
    throw UnsupportedModelError("model '" + model->name + "' has no closed-form compensator");
  }
  if (!(a > 0.0)) throw_domain("truncation level a must be > 0");
  const CadlagPath& X = x.path;
  const double t = X.horizon();
  if (seq.horizon() != t) throw ConfigError("path horizon does not match the partition");

  auto w = [&f](double y, double dx) { return f(y + dx) - f(y) - dx * f.d(y); };
  const Band small{0.0, a, true, true};

  std::vector<JumpEvent> big;
  std::vector<JumpEvent> small_sample;
  std::vector<JumpEvent> nu_fixed;
  for (const auto& j : X.jumps()) {
    const double before = X.left_limit(j.time);
    const double wj = w(before, j.size);
    if (std::abs(j.size) > a) {
      if (wj != 0.0) big.push_back({j.time, wj, j.fixed_time});
    } else if (wj != 0.0) {
      small_sample.push_back({j.time, wj, j.fixed_time});
    }
  }
  for (const auto& fj : model->fixed_jumps) {
    const double before = X.left_limit(fj.time);
    const double g = fj.law.integrate([&](double dx) { return w(before, dx); }, small);
    if (g != 0.0) nu_fixed.push_back({fj.time, g, true});
  }

  const double x0 = X.eval(0.0);
  YaDecomposition::Terms terms{CadlagPath::constant(t, f(x0)), CadlagPath::step(t, big),
                               CadlagPath::zero(t), CadlagPath::zero(t), CadlagPath::zero(t)};

  const CadlagPath z = x.decomposition.semimartingale();
  terms.dz_integral = integral_path([&](double s) { return f.d(X.eval(s)); },
                                        [&](double s) { return f.d(X.left_limit(s)); }, z, seq, k);

  // ν_c time integral ∫_0^s g(X_{u-}) du, left point on D_k ∪ jump times.
  const auto pts = merge_times(seq.level(k), X.jump_times());
  const auto xv = X.eval_sorted(pts);
  std::vector<double> comp(pts.size());
  CompensatedSum acc;
  comp[0] = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double y = xv[i];
    const double g = model->compensator_rate([&](double dx) { return w(y, dx); }, small);
    acc += g * (pts[i + 1] - pts[i]);
    comp[i + 1] = acc.value();
  }
  for (double& c : comp) c = -c;
  std::vector<JumpEvent> small_jumps = small_sample;
  for (auto j : nu_fixed) {
    j.size = -j.size;
    small_jumps.push_back(j);
  }
  std::sort(small_jumps.begin(), small_jumps.end(),
            [](const JumpEvent& l, const JumpEvent& r) { return l.time < r.time; });
  // Merge coincident times (a sampled fixed-time jump and its ν atom).
  std::vector<JumpEvent> merged;
  for (const auto& j : small_jumps) {
    if (!merged.empty() && merged.back().time == j.time) {
      merged.back().size += j.size;
      if (merged.back().size == 0.0) merged.pop_back();
    } else {
      merged.push_back(j);
    }
  }
  terms.small_jumps = CadlagPath(t, pts, std::move(comp), std::move(merged));
  terms.fixed_nu_sum = CadlagPath::step(t, nu_fixed);

  CadlagPath y = terms.initial + terms.big_jumps;
  y = y + terms.dz_integral;
  y = y + terms.small_jumps;
  y = y + terms.fixed_nu_sum;

  const CadlagPath fx = transform_path(f, X);
  const double mismatch = jump_gap(y, fx);
  const double scale = 1.0 + X.sup_process();
  if (mismatch > 1e-9 * scale * scale) {
    throw Error("Y^a jumps disagree with f(X) by " + std::to_string(mismatch));
  }
  CadlagPath y_path = y.with_jumps(fx.jumps());
  CadlagPath gamma = fx - y_path;
  return YaDecomposition{a, k, std::move(y_path), std::move(gamma), std::move(terms), mismatch};
}

std::vector<double> gamma_qv_trend(const YaDecomposition& decomp, const RefiningSequence& seq,
                                   const std::vector<int>& levels) {
  std::vector<double> out;
  out.reserve(levels.size());
  for (int k : levels) out.push_back(partial_qv(decomp.gamma_path, seq, k));
  return out;
}

}  // namespace pathqv
