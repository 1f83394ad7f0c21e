#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pathqv/jump_law.hpp"
#include "pathqv/path.hpp"
#include "pathqv/rng.hpp"

namespace pathqv {

/// b(s) = rate + amplitude·sin(2π·frequency·s); integrated in closed form.
struct DriftSpec {
  double rate = 0.0;
  double amplitude = 0.0;
  double frequency = 1.0;

  [[nodiscard]] double integral(double s) const;
  [[nodiscard]] bool active() const { return rate != 0.0 || amplitude != 0.0; }
};

struct CompoundPoissonSpec {
  double intensity = 0.0;
  JumpLaw law = JumpLaw::uniform(-1.0, 1.0);
};

/// A jump at a deterministic time with random size (fixed-time set 𝒜).
struct FixedJumpSpec {
  double time = 0.0;
  JumpLaw law = JumpLaw::point_mass(1.0);
};

struct FbmSpec {
  double hurst = 0.75;
  double scale = 1.0;
};

/// X = x0 + σW + ∫b + Σ compound Poisson + Σ fixed-time jumps + scale·B^H.
///
/// Decomposition used everywhere: M = σW, A = x0 + ∫b + all jumps (finite
/// activity, so of finite variation), C = scale·B^H.
struct ProcessModel {
  std::string name = "custom";
  double horizon = 1.0;
  double x0 = 0.0;
  double sigma = 0.0;
  DriftSpec drift;
  std::vector<CompoundPoissonSpec> compound_poisson;
  std::vector<FixedJumpSpec> fixed_jumps;
  std::optional<FbmSpec> fbm;

  /// All jump laws admit closed-form integrals.
  [[nodiscard]] bool has_closed_form_compensator() const;
  /// Σ_c λ_c ∫ g(x) 1{x ∈ band} law_c(dx): the ν_c density in time applied to g.
  [[nodiscard]] double compensator_rate(const std::function<double(double)>& g,
                                        const Band& band) const;
  /// Validates parameters; throws ConfigError.
  void validate() const;
};

struct SampledPath {
  CadlagPath path;
  PathDecomposition decomposition;
};

inline constexpr int kMaxGridLevel = 20;

/// Deterministic in (model, key, grid_level). The continuous part lives on the
/// dyadic grid of level `grid_level`; jump times are continuous. Throws
/// ResourceLimitError above kMaxGridLevel.
SampledPath sample_path(const ProcessModel& model, StreamKey key, int grid_level);

enum class CouplingRule { Identity, ScaleJumps, AddNoise, AddFbm, MollifyJumps };

CouplingRule parse_coupling_rule(const std::string& name);
std::string to_string(CouplingRule rule);

/// X^n → X built from common random numbers. Rules act on X^n only:
/// scale_jumps multiplies every jump by (1 - 1/n); add_noise adds
/// (noise_scale/n)·W' with an independent Brownian W'; add_fbm adds
/// (noise_scale/n)·B'^H; mollify_jumps replaces each jump by a linear ramp of
/// length horizon/(16 n) ending at the jump time.
struct CoupledSequence {
  ProcessModel base;
  CouplingRule rule = CouplingRule::Identity;
  double noise_scale = 1.0;
  double noise_hurst = 0.75;

  static constexpr int kInfinity = 0x7fffffff;
};

/// (X^n, X). n = CoupledSequence::kInfinity returns X twice.
std::pair<SampledPath, SampledPath> sample_coupled(const CoupledSequence& seq, int n,
                                                   StreamKey key, int grid_level);
/// X^n from an already sampled X (same key).
SampledPath apply_coupling(const CoupledSequence& seq, int n, const SampledPath& x,
                           StreamKey key, int grid_level);

/// Σ |ΔX_s| over jumps flagged fixed_time.
double fixed_jump_variation(const CadlagPath& path);

/// Dyadic grid of the given level on [0, horizon].
std::vector<double> dyadic_grid(double horizon, int level);

}  // namespace pathqv
