#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace tailwave {

/// A radial function r ↦ value for initial data or potentials, with the
/// pointwise decay metadata |value(r)| <= bound_const / ⟨r⟩^decay_power.
struct RadialProfile {
  std::string name = "zero";
  std::function<double(double)> value = [](double) { return 0.0; };
  /// d/dr value; empty means "use a central difference".
  std::function<double(double)> derivative;
  double decay_power = std::numeric_limits<double>::infinity();
  double bound_const = 0.0;
  /// Exactly supported in [0, support_radius] when compact.
  bool compact = false;
  double support_radius = 0.0;

  double operator()(double r) const { return value(r); }
  double slope(double r) const;
  bool is_zero() const { return name == "zero"; }
};

RadialProfile zero_profile();

/// amplitude · exp(−((r − center)/width)²)
RadialProfile gaussian_profile(double amplitude, double width = 1.0, double center = 0.0);

/// Smooth bump exactly supported on [center − half_width, center + half_width] ∩ [0, ∞):
/// amplitude · exp(1 − 1/(1 − x²)), x = (r − center)/half_width.
/// With center = 0 the support is [0, R] and the profile is even in r.
RadialProfile compact_bump_profile(double amplitude, double radius, double center = 0.0);

/// amplitude · ⟨r⟩^{−power}
RadialProfile powerlaw_profile(double amplitude, double power);

/// Potential V(r) = v0 / ⟨r⟩^k (the strength λ is carried separately).
RadialProfile powerlaw_potential(double k, double v0 = 1.0);

/// Scales a profile by s (metadata follows).
RadialProfile scaled(const RadialProfile& p, double s);

/// Checks |p(r)| <= bound_const/⟨r⟩^decay_power on the mesh (relative slack 1e-12).
bool satisfies_bound(const RadialProfile& p, std::span<const double> mesh);

/// Uniform radial mesh 0, dr, ..., r_max.
std::vector<double> radial_mesh(double r_max, double dr);

}  // namespace tailwave
