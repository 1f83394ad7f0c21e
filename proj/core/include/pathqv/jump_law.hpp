#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pathqv/rng.hpp"

namespace pathqv {

/// Which endpoints of the band lo <= |x| <= hi are included.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = true;
  bool hi_inclusive = true;

  [[nodiscard]] bool contains(double x) const;
};

/// Distribution of a single jump size.
class JumpLaw {
 public:
  enum class Kind { Uniform, Normal, PointMass, Custom };

  static JumpLaw uniform(double lo, double hi);
  static JumpLaw normal(double mean, double sd);
  static JumpLaw point_mass(double value);
  /// Sampler only: no closed-form integrals, so compensator-based operations
  /// reject models using it.
  static JumpLaw custom(std::string name, std::function<double(RngStream&)> sampler);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string describe() const;
  [[nodiscard]] bool has_closed_form() const { return kind_ != Kind::Custom; }
  /// Parameters: (lo, hi) for uniform, (mean, sd) for normal, (value, 0) for a point mass.
  [[nodiscard]] double p0() const { return p0_; }
  [[nodiscard]] double p1() const { return p1_; }

  [[nodiscard]] double sample(RngStream& rng) const;
  /// ∫ g(x) 1{x ∈ band} law(dx). Gauss-Legendre on the continuous laws,
  /// exact for point masses. Throws UnsupportedModelError for custom laws.
  [[nodiscard]] double integrate(const std::function<double(double)>& g, const Band& band) const;
  [[nodiscard]] double probability(const Band& band) const;
  /// True when P(|J| = a) > 0.
  [[nodiscard]] bool has_atom_at_abs(double a) const;
  /// Values carrying positive probability (empty for continuous laws).
  [[nodiscard]] std::vector<double> atoms() const;

 private:
  JumpLaw(Kind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

  Kind kind_;
  double p0_;
  double p1_;
  std::string name_;
  std::function<double(RngStream&)> sampler_;
};

}  // namespace pathqv
