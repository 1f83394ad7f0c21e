#pragma once

#include <vector>

#include "pathqv/models.hpp"
#include "pathqv/partition.hpp"
#include "pathqv/path.hpp"
#include "pathqv/transform.hpp"

namespace pathqv {

/// f(X) = Y^a + Γ^a with Y^a a semimartingale and Γ^a continuous.
struct YaDecomposition {
  struct Terms {
    /// f(X_0), constant.
    CadlagPath initial;
    /// Σ (f(X_s) - f(X_{s-}) - ΔX_s f'(X_{s-})) over |ΔX_s| > a.
    CadlagPath big_jumps;
    /// ∫ f'(X_{s-}) dZ_s at the build level.
    CadlagPath dz_integral;
    /// ∫∫_{|x|<=a} W d(μ - ν), W(s,x) = f(X_{s-}+x) - f(X_{s-}) - x f'(X_{s-}).
    CadlagPath small_jumps;
    /// Σ_s ∫_{|x|<=a} W ν({s}, dx) over the fixed-time schedule.
    CadlagPath fixed_nu_sum;
  };

  double a = 0.0;
  int level = 0;
  CadlagPath y_path;
  CadlagPath gamma_path;
  Terms terms;
  /// max |ΔY^a - Δf(X)| over jump times before Y^a's jumps were aligned with f(X).
  double jump_mismatch = 0.0;
};

/// Assembles the five terms at partition level k (the dZ integral and the
/// ν_c time integral are both discretized on D_k ∪ jump times). Throws
/// UnsupportedModelError when `model` is null or lacks closed-form jump laws,
/// and DomainError for a <= 0.
YaDecomposition build_ya(const Transform& f, const SampledPath& x, const ProcessModel* model,
                         double a, const RefiningSequence& seq, int k);

/// partial_qv(Γ^a) at each level in `levels`.
std::vector<double> gamma_qv_trend(const YaDecomposition& decomp, const RefiningSequence& seq,
                                   const std::vector<int>& levels);

}  // namespace pathqv
