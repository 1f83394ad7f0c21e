#include "pathqv/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pathqv/error.hpp"

namespace pathqv {

Transform::Transform(Parts parts) : parts_(std::make_shared<const Parts>(std::move(parts))) {
  if (!parts_->value || !parts_->derivative) {
    throw ConfigError("transform '" + parts_->name + "' needs a value and a derivative");
  }
  if (!parts_->lipschitz_on) throw ConfigError("transform '" + parts_->name + "' needs a Lipschitz bound");
}

double Transform::d2(double x) const {
  if (!parts_->second) throw ConfigError("transform '" + name() + "' has no second derivative");
  return (*parts_->second)(x);
}

Transform Transform::identity() {
  return Transform({"identity", [](double x) { return x; }, [](double) { return 1.0; },
                    RealFn([](double) { return 0.0; }), [](double) { return 1.0; },
                    Smoothness::C2, {}});
}

Transform Transform::square() {
  return Transform({"square", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                    RealFn([](double) { return 2.0; }), [](double r) { return 2.0 * r; },
                    Smoothness::C2, {}});
}

Transform Transform::exp() {
  return Transform({"exp", [](double x) { return std::exp(x); },
                    [](double x) { return std::exp(x); },
                    RealFn([](double x) { return std::exp(x); }),
                    [](double r) { return std::exp(r); }, Smoothness::C2, {}});
}

Transform Transform::abs() {
  return Transform({"abs", [](double x) { return std::abs(x); },
                    [](double x) { return x >= 0.0 ? 1.0 : -1.0; }, std::nullopt,
                    [](double) { return 1.0; }, Smoothness::Lipschitz, {0.0}});
}

Transform Transform::relu() {
  return Transform({"relu", [](double x) { return x > 0.0 ? x : 0.0; },
                    [](double x) { return x >= 0.0 ? 1.0 : 0.0; }, std::nullopt,
                    [](double) { return 1.0; }, Smoothness::Lipschitz, {0.0}});
}

Transform Transform::sin() {
  return Transform({"sin", [](double x) { return std::sin(x); },
                    [](double x) { return std::cos(x); },
                    RealFn([](double x) { return -std::sin(x); }), [](double) { return 1.0; },
                    Smoothness::C2, {}});
}

Transform Transform::affine(double slope, double intercept) {
  return Transform({"affine", [=](double x) { return slope * x + intercept; },
                    [=](double) { return slope; }, RealFn([](double) { return 0.0; }),
                    [=](double) { return std::abs(slope); }, Smoothness::C2, {}});
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

Transform make_transform(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "identity") return Transform::identity();
  if (name == "square") return Transform::square();
  if (name == "exp") return Transform::exp();
  if (name == "abs") return Transform::abs();
  if (name == "relu") return Transform::relu();
  if (name == "sin") return Transform::sin();
  if (name == "affine") {
    return Transform::affine(param_or(params, "slope", 1.0), param_or(params, "intercept", 0.0));
  }
  throw ConfigError("unknown transform '" + name + "'");
}

TransformSequence::TransformSequence(std::string name, std::function<Transform(int)> term,
                                     Transform limit, double anchor)
    : name_(std::move(name)), term_(std::move(term)), limit_(std::move(limit)), anchor_(anchor) {}

Transform TransformSequence::at(int n) const {
  if (n == kInfinity) return limit_;
  if (n < 1) throw_domain("sequence index must be >= 1");
  return term_(n);
}

TransformSequence builtin_sequence(const std::string& name,
                                   const std::map<std::string, double>& params) {
  if (name == "mollified_abs") {
    auto term = [](int n) {
      const double eps = 1.0 / n;
      return Transform({"mollified_abs_" + std::to_string(n),
                        [eps](double x) { return std::sqrt(x * x + eps); },
                        [eps](double x) { return x / std::sqrt(x * x + eps); },
                        RealFn([eps](double x) {
                          const double r = x * x + eps;
                          return eps / (r * std::sqrt(r));
                        }),
                        [](double) { return 1.0; }, Smoothness::C2, {}});
    };
    return TransformSequence(name, term, Transform::abs());
  }
  if (name == "shifted_relu_smooth") {
    auto term = [](int n) {
      const double eps = 1.0 / (static_cast<double>(n) * n);
      return Transform({"shifted_relu_smooth_" + std::to_string(n),
                        [eps](double x) { return 0.5 * (x + std::sqrt(x * x + eps)); },
                        [eps](double x) { return 0.5 * (1.0 + x / std::sqrt(x * x + eps)); },
                        RealFn([eps](double x) {
                          const double r = x * x + eps;
                          return 0.5 * eps / (r * std::sqrt(r));
                        }),
                        [](double) { return 1.0; }, Smoothness::C2, {}});
    };
    return TransformSequence(name, term, Transform::relu());
  }
  if (name == "polynomial_family") {
    auto term = [](int n) {
      const double c = 1.0 / n;
      return Transform({"polynomial_family_" + std::to_string(n),
                        [c](double x) { return x * x + c * x; },
                        [c](double x) { return 2.0 * x + c; },
                        RealFn([](double) { return 2.0; }),
                        [c](double r) { return 2.0 * r + c; }, Smoothness::C2, {}});
    };
    return TransformSequence(name, term, Transform::square());
  }
  const std::string prefix = "constant_";
  if (name.rfind(prefix, 0) == 0) {
    Transform f = make_transform(name.substr(prefix.size()), params);
    return TransformSequence(name, [f](int) { return f; }, f);
  }
  throw ConfigError("unknown transform sequence '" + name + "'");
}

SequenceCheck check_sequence(const TransformSequence& seq, const std::vector<int>& ns,
                             double radius, double exclusion) {
  SequenceCheck out;
  const Transform& f = seq.limit();
  constexpr int kPoints = 4001;
  for (int n : ns) {
    const Transform fn = seq.at(n);
    double worst = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double x = -radius + 2.0 * radius * i / (kPoints - 1);
      const bool near_kink = std::any_of(f.kinks().begin(), f.kinks().end(),
                                         [&](double c) { return std::abs(x - c) < exclusion; });
      if (near_kink) continue;
      worst = std::max(worst, std::abs(fn.d(x) - f.d(x)));
    }
    if (!out.derivative_sup.empty() && worst > out.derivative_sup.back()) out.decreasing = false;
    out.derivative_sup.push_back(worst);
    out.anchor_error.push_back(std::abs(fn(seq.anchor()) - f(seq.anchor())));
  }
  return out;
}

TransformCheck check_transform(const Transform& f, double radius, int samples, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  TransformCheck out;
  const double lip = f.lipschitz_on(radius);
  constexpr double h = 1e-5;
  for (int i = 0; i < samples; ++i) {
    const double x = u(gen);
    const double y = u(gen);
    if (x != y && lip > 0.0) {
      out.max_lipschitz_ratio =
          std::max(out.max_lipschitz_ratio, std::abs(f(x) - f(y)) / (lip * std::abs(x - y)));
    }
    if (f.has_second()) {
      const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
      const double err = std::abs(fd - f.d(x)) / std::max(1.0, std::abs(f.d(x)));
      out.max_derivative_error = std::max(out.max_derivative_error, err);
    }
  }
  return out;
}

namespace {

struct ChebyshevSeries {
  std::vector<double> coef;  // Σ coef[k] T_k(u)

  [[nodiscard]] double operator()(double u) const {
    // Clenshaw recurrence.
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = coef.size(); k-- > 1;) {
      const double b0 = coef[k] + 2.0 * u * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return coef.empty() ? 0.0 : coef[0] + u * b1 - b2;
  }
};

ChebyshevSeries chebyshev_fit(const RealFn& g, int degree) {
  // Discrete least squares at Chebyshev-Gauss nodes; orthogonality makes the
  // normal equations diagonal.
  const int nodes = std::max(8 * (degree + 1), 512);
  std::vector<double> u(nodes);
  std::vector<double> gv(nodes);
  for (int i = 0; i < nodes; ++i) {
    u[i] = std::cos(std::numbers::pi * (i + 0.5) / nodes);
    gv[i] = g(u[i]);
  }
  ChebyshevSeries s;
  s.coef.resize(degree + 1);
  for (int k = 0; k <= degree; ++k) {
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
      acc += gv[i] * std::cos(k * std::numbers::pi * (i + 0.5) / nodes);
    }
    s.coef[k] = (k == 0 ? 1.0 : 2.0) * acc / nodes;
  }
  return s;
}

ChebyshevSeries chebyshev_integral(const ChebyshevSeries& a) {
  const std::size_t n = a.coef.size();
  auto at = [&](std::size_t k) { return k < n ? a.coef[k] : 0.0; };
  ChebyshevSeries b;
  b.coef.assign(n + 1, 0.0);
  if (n == 0) return b;
  b.coef[1] = at(0) - 0.5 * at(2);
  for (std::size_t k = 2; k <= n; ++k) b.coef[k] = (at(k - 1) - at(k + 1)) / (2.0 * k);
  return b;
}

ChebyshevSeries chebyshev_derivative(const ChebyshevSeries& a) {
  const std::size_t n = a.coef.size();
  ChebyshevSeries d;
  if (n <= 1) {
    d.coef = {0.0};
    return d;
  }
  d.coef.assign(n - 1, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) {
    const double next = k + 2 < n - 1 ? d.coef[k + 2] : 0.0;
    d.coef[k] = next + 2.0 * (k + 1) * a.coef[k + 1];
  }
  d.coef[0] *= 0.5;
  return d;
}

}  // namespace

PolynomialApprox polynomial_derivative_approx(const Transform& f, double m, int n) {
  if (!(m > 0.0) || n < 1) throw_domain("polynomial approximation needs m > 0 and n >= 1");
  const ChebyshevSeries p = chebyshev_fit([&](double u) { return f.d(m * u); }, n);
  const ChebyshevSeries q = chebyshev_integral(p);
  const ChebyshevSeries dp = chebyshev_derivative(p);
  const double q_left = q(-1.0);
  const double f_left = f(-m);

  double sup = 0.0;
  constexpr int kCheck = 20001;
  for (int i = 0; i < kCheck; ++i) {
    const double u = -1.0 + 2.0 * i / (kCheck - 1);
    sup = std::max(sup, std::abs(p(u) - f.d(m * u)));
  }

  const double lip_fit = [&] {
    double l = 0.0;
    for (double c : p.coef) l += std::abs(c);
    return l;
  }();
  Transform::Parts parts{
      f.name() + "_poly" + std::to_string(n),
      [=](double x) { return f_left + m * (q(x / m) - q_left); },
      [=](double x) { return p(x / m); },
      RealFn([=](double x) { return dp(x / m) / m; }),
      [=](double r) {
        if (r <= m) return lip_fit;
        // |T_k(u)| <= (|u| + sqrt(u² - 1))^k outside [-1, 1].
        const double u = r / m;
        const double rho = u + std::sqrt(u * u - 1.0);
        double l = 0.0;
        double pw = 1.0;
        for (double c : p.coef) {
          l += std::abs(c) * pw;
          pw *= rho;
        }
        return l;
      },
      Smoothness::C2,
      {}};
  return {Transform(std::move(parts)), sup};
}

}  // namespace pathqv
