#include "pathqv/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "pathqv/error.hpp"

namespace pathqv {

bool Band::contains(double x) const {
  const double ax = std::abs(x);
  const bool above = lo_inclusive ? ax >= lo : ax > lo;
  const bool below = hi_inclusive ? ax <= hi : ax < hi;
  return above && below;
}

JumpLaw JumpLaw::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("uniform jump law needs lo < hi");
  }
  return JumpLaw(Kind::Uniform, lo, hi);
}

JumpLaw JumpLaw::normal(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) throw ConfigError("normal jump law needs sd > 0");
  return JumpLaw(Kind::Normal, mean, sd);
}

JumpLaw JumpLaw::point_mass(double value) {
  if (value == 0.0 || !std::isfinite(value)) {
    throw ConfigError("point-mass jump law needs a nonzero finite value");
  }
  return JumpLaw(Kind::PointMass, value, 0.0);
}

JumpLaw JumpLaw::custom(std::string name, std::function<double(RngStream&)> sampler) {
  JumpLaw law(Kind::Custom, 0.0, 0.0);
  law.name_ = std::move(name);
  law.sampler_ = std::move(sampler);
  return law;
}

std::string JumpLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Uniform: os << "uniform(" << p0_ << "," << p1_ << ")"; break;
    case Kind::Normal: os << "normal(" << p0_ << "," << p1_ << ")"; break;
    case Kind::PointMass: os << "point_mass(" << p0_ << ")"; break;
    case Kind::Custom: os << "custom(" << name_ << ")"; break;
  }
  return os.str();
}

double JumpLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::Uniform: {
      // Redraw the (measure-zero) exact zero so every sampled jump is nonzero.
      for (;;) {
        const double x = p0_ + (p1_ - p0_) * rng.uniform();
        if (x != 0.0) return x;
      }
    }
    case Kind::Normal: {
      std::normal_distribution<double> nd(p0_, p1_);
      for (;;) {
        const double x = nd(rng);
        if (x != 0.0) return x;
      }
    }
    case Kind::PointMass: return p0_;
    case Kind::Custom: return sampler_(rng);
  }
  return 0.0;
}

namespace {

constexpr int kPanels = 8;

// Composite 20-point Gauss-Legendre over [a, b].
double composite(const std::function<double(double)>& h, double a, double b) {
  if (!(b > a)) return 0.0;
  using Q = boost::math::quadrature::gauss<double, 20>;
  const double w = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + i * w;
    const double hi = i + 1 == kPanels ? b : lo + w;
    total += Q::integrate(h, lo, hi);
  }
  return total;
}

}  // namespace

double JumpLaw::integrate(const std::function<double(double)>& g, const Band& band) const {
  switch (kind_) {
    case Kind::PointMass: return band.contains(p0_) ? g(p0_) : 0.0;
    case Kind::Custom:
      throw UnsupportedModelError("jump law " + describe() + " has no closed-form integrals");
    case Kind::Uniform:
    case Kind::Normal: break;
  }
  double support_lo;
  double support_hi;
  std::function<double(double)> density;
  if (kind_ == Kind::Uniform) {
    support_lo = p0_;
    support_hi = p1_;
    const double d = 1.0 / (p1_ - p0_);
    density = [d](double) { return d; };
  } else {
    support_lo = p0_ - 12.0 * p1_;
    support_hi = p0_ + 12.0 * p1_;
    const double mean = p0_;
    const double sd = p1_;
    density = [mean, sd](double x) {
      const double z = (x - mean) / sd;
      return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
  }
  const double hi = std::isfinite(band.hi) ? band.hi : std::numeric_limits<double>::max();
  auto h = [&](double x) { return g(x) * density(x); };
  // Band = [-hi, -lo] ∪ [lo, hi]; endpoints carry no mass for continuous laws.
  double total = 0.0;
  total += composite(h, std::max(support_lo, -hi), std::min(support_hi, -band.lo));
  total += composite(h, std::max(support_lo, band.lo), std::min(support_hi, hi));
  return total;
}

double JumpLaw::probability(const Band& band) const {
  return integrate([](double) { return 1.0; }, band);
}

bool JumpLaw::has_atom_at_abs(double a) const {
  return kind_ == Kind::PointMass && std::abs(p0_) == a;
}

std::vector<double> JumpLaw::atoms() const {
  if (kind_ == Kind::PointMass) return {p0_};
  return {};
}

}  // namespace pathqv
