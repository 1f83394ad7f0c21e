#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pathqv {

using RealFn = std::function<double(double)>;

enum class Smoothness { C2, C1, Lipschitz };

/// A real function with its Dini derivative and, when it exists, its second
/// derivative. Cheap to copy (shared immutable state).
class Transform {
 public:
  struct Parts {
    std::string name;
    RealFn value;
    RealFn derivative;
    std::optional<RealFn> second;
    /// Lipschitz constant on [-R, R].
    std::function<double(double)> lipschitz_on;
    Smoothness smoothness = Smoothness::C2;
    /// Points where the derivative jumps; transform_path inserts crossings.
    std::vector<double> kinks;
  };

  explicit Transform(Parts parts);

  [[nodiscard]] const std::string& name() const { return parts_->name; }
  [[nodiscard]] double operator()(double x) const { return parts_->value(x); }
  [[nodiscard]] double d(double x) const { return parts_->derivative(x); }
  [[nodiscard]] bool has_second() const { return parts_->second.has_value(); }
  /// f''(x); throws ConfigError when absent.
  [[nodiscard]] double d2(double x) const;
  [[nodiscard]] double lipschitz_on(double radius) const { return parts_->lipschitz_on(radius); }
  [[nodiscard]] Smoothness smoothness() const { return parts_->smoothness; }
  [[nodiscard]] const std::vector<double>& kinks() const { return parts_->kinks; }

  static Transform identity();
  static Transform square();
  static Transform exp();
  /// |x| with f'(0) = 1.
  static Transform abs();
  /// max(x, 0) with f'(0) = 1.
  static Transform relu();
  static Transform sin();
  static Transform affine(double slope, double intercept);

 private:
  std::shared_ptr<const Parts> parts_;
};

/// Built-in transforms by name: identity, square, exp, abs, relu, sin, affine
/// (params "slope", "intercept").
Transform make_transform(const std::string& name, const std::map<std::string, double>& params = {});

/// f_n -> f with f_n' -> f' uniformly on compacts.
class TransformSequence {
 public:
  TransformSequence(std::string name, std::function<Transform(int)> term, Transform limit,
                    double anchor = 0.0);

  [[nodiscard]] const std::string& name() const { return name_; }
  /// f_n; the sentinel n = kInfinity returns the limit.
  [[nodiscard]] Transform at(int n) const;
  [[nodiscard]] const Transform& limit() const { return limit_; }
  [[nodiscard]] double anchor() const { return anchor_; }

  static constexpr int kInfinity = 0x7fffffff;

 private:
  std::string name_;
  std::function<Transform(int)> term_;
  Transform limit_;
  double anchor_;
};

/// mollified_abs: sqrt(x² + 1/n) -> |x|.
/// shifted_relu_smooth: (x + sqrt(x² + 1/n²))/2 -> max(x, 0).
/// polynomial_family: x² + x/n -> x².
/// constant_<transform>: f_n = f for any built-in transform name.
TransformSequence builtin_sequence(const std::string& name,
                                   const std::map<std::string, double>& params = {});

struct SequenceCheck {
  /// sup over the check grid on [-R, R] of |f_n' - f'| for each requested n.
  std::vector<double> derivative_sup;
  std::vector<double> anchor_error;
  bool decreasing = true;
};

/// Numerical uniform-convergence check on [-radius, radius], skipping points
/// within `exclusion` of the limit's kinks.
SequenceCheck check_sequence(const TransformSequence& seq, const std::vector<int>& ns,
                             double radius, double exclusion = 0.0);

struct TransformCheck {
  double max_lipschitz_ratio = 0.0;  // max |f(x)-f(y)| / (L(R)|x-y|), should be <= 1
  double max_derivative_error = 0.0; // relative FD error of f', only for C2 transforms
};

/// Spot-checks the Lipschitz bound and f' against central differences.
TransformCheck check_transform(const Transform& f, double radius, int samples, unsigned seed);

/// Transform whose derivative is the degree-n Chebyshev least-squares fit of
/// f' on [-m, m], value = f(-m) + ∫_{-m}^x p_n. Outside [-m, m] the polynomial
/// is evaluated as is.
struct PolynomialApprox {
  Transform transform;
  /// sup |p_n - f'| on a fine grid of [-m, m].
  double derivative_sup_error;
};
PolynomialApprox polynomial_derivative_approx(const Transform& f, double m, int n);

}  // namespace pathqv
