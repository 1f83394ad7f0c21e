#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pathqv/partition.hpp"
#include "pathqv/path.hpp"
#include "pathqv/transform.hpp"

namespace pathqv {

struct JumpCheck {
  double time = 0.0;
  /// Increment of I^k over the partition interval covering the jump.
  double increment = 0.0;
  /// Y_{s-} ΔX_s.
  double target = 0.0;
  double error = 0.0;
};

struct IntegralTrace {
  int level = 0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<JumpCheck> jump_checks;
};

/// I^k(Y, X)_s = Σ_{t_i ∈ D_k, t_i <= s} Y_{t_i} (X_{t_{i+1}∧s} - X_{t_i}).
double foellmer_integral(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k, double s);
double foellmer_integral(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k);

/// Running I^k at every point of D_k plus the per-jump check.
IntegralTrace integral_trace(const CadlagPath& integrand, const CadlagPath& integrator,
                             const RefiningSequence& seq, int k);

/// The integral as a path: continuous part is the running left-point sum
/// against the integrator's continuous component on D_k; jumps are
/// integrand_left(s) ΔX_s exactly. `integrand_at(t)` gives the integrand at
/// partition points, `integrand_left(s)` its left limit at jump times.
CadlagPath integral_path(const std::function<double(double)>& integrand_at,
                         const std::function<double(double)>& integrand_left,
                         const CadlagPath& integrator, const RefiningSequence& seq, int k);
CadlagPath integral_path(const CadlagPath& integrand, const CadlagPath& integrator,
                         const RefiningSequence& seq, int k);

/// |I^k(X,Y)_t + I^k(Y,X)_t + S_k(X,Y)_t - (X_tY_t - X_0Y_0)|.
double integration_by_parts_residual(const CadlagPath& x, const CadlagPath& y,
                                     const RefiningSequence& seq, int k);

/// Discrete Itô formula residual at the horizon. Integrands are evaluated at
/// the left partition point; the ∫f'' d[X]^c term uses the increments of the
/// continuous part of S_k. Throws ConfigError when f has no f''.
double ito_formula_residual(const Transform& f, const CadlagPath& x, const RefiningSequence& seq,
                            int k);

struct TransformQV {
  double lhs = 0.0;  // S_k(f(X))_t
  double rhs = 0.0;  // Σ f'(X_{t_i})² Δ[X]^c_k + Σ (Δf(X_u))²
};

TransformQV transform_qv_check(const Transform& f, const CadlagPath& x,
                               const RefiningSequence& seq, int k);

/// f(X) as a path. Its continuous component is resampled on X's grid plus
/// jump times, refined where f curves and at kink crossings so linear
/// interpolation stays within 1e-6 (relative, floor 1) of f(X).
CadlagPath transform_path(const Transform& f, const CadlagPath& x);

/// Columns: s, I_k. Jump checks follow as a second table.
void write_integral_trace_csv(std::ostream& os, const IntegralTrace& trace);

}  // namespace pathqv
