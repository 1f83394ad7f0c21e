#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pathqv {

/// A single jump ΔX_s of a càdlàg path.
struct JumpEvent {
  double time = 0.0;
  double size = 0.0;
  /// True when the time belongs to the model's deterministic fixed-time set.
  bool fixed_time = false;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Càdlàg sample path on [0, horizon].
///
/// The continuous component is piecewise linear on an explicit grid; jumps are
/// kept separately and exactly, never snapped onto the grid. The value at s is
/// the interpolated continuous component plus every jump with time <= s, so the
/// path is right-continuous with left limits by construction.
///
/// Paths are immutable once built and may be shared across threads.
class CadlagPath {
 public:
  /// Validates: horizon > 0, grid strictly increasing from 0 to horizon, one
  /// value per grid point, jump times strictly increasing in (0, horizon],
  /// nonzero finite sizes. Throws DomainError otherwise.
  CadlagPath(double horizon, std::vector<double> grid, std::vector<double> cont_values,
             std::vector<JumpEvent> jumps = {});

  static CadlagPath constant(double horizon, double value);
  static CadlagPath zero(double horizon) { return constant(horizon, 0.0); }
  static CadlagPath linear(double horizon, double start, double end);
  /// Pure-jump path starting at `start`.
  static CadlagPath step(double horizon, std::vector<JumpEvent> jumps, double start = 0.0);
  /// Continuous path sampled from `fn` on `grid`, plus the given jumps.
  static CadlagPath sampled(double horizon, std::vector<double> grid,
                            const std::function<double(double)>& fn,
                            std::vector<JumpEvent> jumps = {});

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<double>& cont_values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<JumpEvent>& jumps() const noexcept { return jumps_; }
  [[nodiscard]] bool has_jumps() const noexcept { return !jumps_.empty(); }
  [[nodiscard]] std::vector<double> jump_times() const;

  /// X_s. Throws DomainError for s outside [0, horizon].
  [[nodiscard]] double eval(double s) const;
  /// X_{s-}. Requires 0 < s <= horizon.
  [[nodiscard]] double left_limit(double s) const;
  /// ΔX_s, zero when s is not a jump time.
  [[nodiscard]] double jump_at(double s) const noexcept;
  /// Interpolated continuous component at s.
  [[nodiscard]] double continuous_at(double s) const;
  /// Σ_{u<=s} ΔX_u.
  [[nodiscard]] double jump_sum(double s) const noexcept;
  /// Σ_{u<s} ΔX_u.
  [[nodiscard]] double jump_sum_before(double s) const noexcept;

  /// X at each of `times`, which must be nondecreasing and inside [0, horizon].
  /// Single merge sweep, O(grid + jumps + times).
  [[nodiscard]] std::vector<double> eval_sorted(std::span<const double> times) const;
  /// Continuous component at nondecreasing `times`.
  [[nodiscard]] std::vector<double> continuous_sorted(std::span<const double> times) const;

  /// sup_{u<=s} |X_u|; exact for piecewise-linear-plus-jumps paths.
  [[nodiscard]] double sup_process(double s) const;
  [[nodiscard]] double sup_process() const { return sup_process(horizon_); }

  /// X^T (open = false) or X^{T-} (open = true: frozen at the left limit and
  /// the jump at T removed).
  [[nodiscard]] CadlagPath stopped(double T, bool open) const;

  [[nodiscard]] CadlagPath continuous_component() const;
  [[nodiscard]] CadlagPath jump_component() const;
  /// Same continuous component, jump list replaced.
  [[nodiscard]] CadlagPath with_jumps(std::vector<JumpEvent> jumps) const;
  /// Keeps the jumps for which `keep` returns true.
  [[nodiscard]] CadlagPath filter_jumps(const std::function<bool(const JumpEvent&)>& keep) const;

  [[nodiscard]] double sum_squared_jumps() const noexcept;

  friend CadlagPath operator+(const CadlagPath& a, const CadlagPath& b);
  friend CadlagPath operator-(const CadlagPath& a, const CadlagPath& b);
  friend CadlagPath operator*(double c, const CadlagPath& p);
  CadlagPath operator-() const { return (-1.0) * *this; }

 private:
  struct Unchecked {};
  CadlagPath(Unchecked, double horizon, std::vector<double> grid, std::vector<double> values,
             std::vector<JumpEvent> jumps);
  void build_prefix();
  [[nodiscard]] std::size_t segment_of(double s) const noexcept;
  [[nodiscard]] double interpolate(std::size_t seg, double s) const noexcept;
  void require_in_domain(double s) const;

  double horizon_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<JumpEvent> jumps_;
  std::vector<double> cum_jumps_;  // cum_jumps_[i] = Σ_{j<=i} size_j
};

/// Sorted union of two strictly increasing time lists.
std::vector<double> merge_times(std::span<const double> a, std::span<const double> b);

/// max |a(s) - b(s)| over both grids and all jump times (right values and left limits).
double max_abs_difference(const CadlagPath& a, const CadlagPath& b);

/// X = M + A + C: local-martingale part, finite-variation part (carries X_0 and
/// the finite-activity jumps), continuous zero-QV part.
struct PathDecomposition {
  CadlagPath total;
  CadlagPath mart;
  CadlagPath fv;
  CadlagPath zero_qv;

  /// Throws DomainError when horizons differ or zero_qv has jumps.
  void validate() const;
  /// max |total - (mart + fv + zero_qv)|.
  [[nodiscard]] double residual() const;
  /// Semimartingale part Z = M + A.
  [[nodiscard]] CadlagPath semimartingale() const { return mart + fv; }
};

}  // namespace pathqv
