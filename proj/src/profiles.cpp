#include "tailwave/profiles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tailwave {

namespace {

double bracket(double r) { return 1.0 + std::abs(r); }

}  // namespace

double RadialProfile::slope(double r) const {
  if (derivative) return derivative(r);
  const double d = 1e-5 * std::max(1.0, std::abs(r));
  const double lo = std::max(0.0, r - d);
  return (value(r + d) - value(lo)) / (r + d - lo);
}

RadialProfile zero_profile() {
  RadialProfile p;
  p.derivative = [](double) { return 0.0; };
  p.compact = true;
  return p;
}

RadialProfile gaussian_profile(double amplitude, double width, double center) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
  RadialProfile p;
  p.name = "gaussian";
  p.value = [=](double r) {
    const double x = (r - center) / width;
    return amplitude * std::exp(-x * x);
  };
  p.derivative = [=](double r) {
    const double x = (r - center) / width;
    return -2.0 * x / width * amplitude * std::exp(-x * x);
  };
  // Faster than any power; the constant is left to measured norms.
  p.decay_power = std::numeric_limits<double>::infinity();
  p.bound_const = std::abs(amplitude);
  return p;
}

RadialProfile compact_bump_profile(double amplitude, double radius, double center) {
  if (!(radius > 0.0)) throw std::invalid_argument("compact-bump radius must be > 0");
  const double half_width = center > 0.0 ? radius - center : radius;
  if (!(half_width > 0.0) || center < 0.0) {
    throw std::invalid_argument("compact-bump center must lie in [0, radius)");
  }
  RadialProfile p;
  p.name = "compact-bump";
  p.value = [=](double r) {
    const double x = (r - center) / half_width;
    if (std::abs(x) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
  };
  p.derivative = [=](double r) {
    const double x = (r - center) / half_width;
    if (std::abs(x) >= 1.0) return 0.0;
    const double d = 1.0 - x * x;
    return amplitude * std::exp(1.0 - 1.0 / d) * (-2.0 * x / (d * d)) / half_width;
  };
  p.decay_power = std::numeric_limits<double>::infinity();
  p.bound_const = std::abs(amplitude);
  p.compact = true;
  p.support_radius = radius;
  return p;
}

RadialProfile powerlaw_profile(double amplitude, double power) {
  RadialProfile p;
  p.name = "powerlaw";
  p.value = [=](double r) { return amplitude * std::pow(bracket(r), -power); };
  p.derivative = [=](double r) { return -power * amplitude * std::pow(bracket(r), -power - 1.0); };
  p.decay_power = power;
  p.bound_const = std::abs(amplitude);
  return p;
}

RadialProfile powerlaw_potential(double k, double v0) {
  RadialProfile p = powerlaw_profile(v0, k);
  p.name = "powerlaw-potential";
  return p;
}

RadialProfile scaled(const RadialProfile& p, double s) {
  RadialProfile out = p;
  if (s == 0.0) return zero_profile();
  auto f = p.value;
  out.value = [f, s](double r) { return s * f(r); };
  if (p.derivative) {
    auto d = p.derivative;
    out.derivative = [d, s](double r) { return s * d(r); };
  }
  out.bound_const = std::abs(s) * p.bound_const;
  return out;
}

bool satisfies_bound(const RadialProfile& p, std::span<const double> mesh) {
  for (double r : mesh) {
    const double lhs = std::abs(p(r));
    const double rhs = std::isinf(p.decay_power)
                           ? p.bound_const
                           : p.bound_const * std::pow(bracket(r), -p.decay_power);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

std::vector<double> radial_mesh(double r_max, double dr) {
  if (!(dr > 0.0) || r_max < 0.0) throw std::invalid_argument("radial_mesh: bad extent");
  const auto n = static_cast<std::size_t>(std::floor(r_max / dr + 1e-9));
  std::vector<double> mesh(n + 1);
  for (std::size_t k = 0; k <= n; ++k) mesh[k] = static_cast<double>(k) * dr;
  return mesh;
}

}  // namespace tailwave
