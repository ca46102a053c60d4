#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tailwave/field.hpp"
#include "tailwave/profiles.hpp"

namespace tailwave {

/// ⟨x⟩ = 1 + |x|.
inline double bracket(double x) { return 1.0 + (x < 0.0 ? -x : x); }

/// sup over the mesh of ⟨r⟩^m |f(r)|.  A mesh sup is a lower bound of the true sup.
double norm_space(const RadialProfile& f, double m, std::span<const double> mesh);
double norm_space(std::span<const double> r, std::span<const double> values, double m);

/// sup over off-axis grid nodes of ⟨t+r⟩^q ⟨t−r⟩^{p−q} |u(t,r)|.
double norm_spacetime(const SpacetimeField& u, double q, double p);

/// Same sup restricted to nodes where keep(t, r) holds.
double norm_spacetime_where(const SpacetimeField& u, double q, double p,
                            const std::function<bool(double t, double r)>& keep);

/// max(9/(2(m−2)), 5), m > 2.
double c_m(double m);

/// 2 + 8/(p−1) + 2/(q−1), p, q > 1.
double c_pq(double p, double q);

enum class EquationClass { linear, nonlinear, full };

struct ExponentPrediction {
  double value = 0.0;
  /// Violated hypotheses of the matching theorem (empty when in range).
  std::vector<std::string> violations;
  bool in_hypothesis() const { return violations.empty(); }
};

/// linear: min(k, m−1); nonlinear: min(p−1, m−1); full: min(p−1, k, m−1).
/// Compact data are passed as m = +∞.
ExponentPrediction predicted_exponent(double m, double k, double p, EquationClass cls);

const char* to_string(EquationClass cls);

}  // namespace tailwave
