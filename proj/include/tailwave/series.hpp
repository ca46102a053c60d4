#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailwave/field.hpp"

namespace tailwave {

/// Analytic nonlinearity F(u) = Σ_{n≥p} b_n uⁿ.
///
/// Integer leading power p ≥ 2 with Taylor coefficients is the general
/// form.  A real power p > 1 without Taylor coefficients is also accepted
/// (F(u) = coeff·u|u|^{p−1}); such an F can be iterated but has no
/// perturbation hierarchy.
struct NonlinearitySpec {
  /// b[n] multiplies uⁿ; entries below p are zero.
  std::vector<double> b;
  double p = 3.0;
  double radius = std::numeric_limits<double>::infinity();
  /// Envelope constants: |F(u)| <= F1|u|^p and
  /// |F(u) − F(v)| <= F2 |u − v| max(|u|,|v|)^{p−1} for |u|,|v| < min(1, R_F).
  double F1 = 0.0;
  double F2 = 0.0;
  /// Only for the non-polynomial power form.
  double power_coeff = 0.0;

  static NonlinearitySpec none();
  /// F(u) = c·uᵖ for integer p.
  static NonlinearitySpec monomial(int p, double c = 1.0);
  /// F(u) = Σ coeffs[n] uⁿ; p is the lowest nonzero power.
  static NonlinearitySpec polynomial(std::vector<double> coeffs,
                                     double radius = std::numeric_limits<double>::infinity());
  /// F(u) = c·u|u|^{p−1}, real p > 1 (iteration only).
  static NonlinearitySpec power(double p, double c = 1.0);

  double operator()(double u) const;
  bool is_zero() const;
  bool has_taylor() const { return !b.empty(); }
  /// Integer p ≥ 2 with Taylor coefficients.
  bool supports_hierarchy() const;
  int degree() const { return b.empty() ? 0 : static_cast<int>(b.size()) - 1; }
  double coeff(int n) const { return n >= 0 && n < static_cast<int>(b.size()) ? b[n] : 0.0; }
};

/// F̃(u) = Σ |b_n| uⁿ: same p and convergence radius.
NonlinearitySpec majorant_of(const NonlinearitySpec& F);

/// Truncated power series Σ_{n=1}^{N} εⁿ c_n.  Slot 0 (ε⁰) is absent.
template <typename T>
struct EpsSeries {
  std::vector<T> coeffs;  // coeffs[n - 1] multiplies εⁿ

  int order() const { return static_cast<int>(coeffs.size()); }
  const T& operator[](int n) const { return coeffs.at(static_cast<std::size_t>(n - 1)); }
  T& operator[](int n) { return coeffs.at(static_cast<std::size_t>(n - 1)); }
};

using ScalarSeries = EpsSeries<double>;
using FieldSeries = EpsSeries<SpacetimeField>;

/// F(Σ_{k=1}^{N} εᵏ v_k) truncated at ε^{N+1}; coefficient n+1 is F_n(v_1..v_n).
ScalarSeries compose_F(const NonlinearitySpec& F, const ScalarSeries& v);

/// F_n(v_1, …, v_n) as a scalar (coefficient of ε^{n+1}); v holds at least n coefficients.
double compose_coefficient(const NonlinearitySpec& F, std::span<const double> v, int n);

/// Field version of compose_F.  Each coefficient is the stored r·F_n.
FieldSeries compose_F(const NonlinearitySpec& F, const FieldSeries& v);

/// Field r·F_n(v_1..v_n) evaluated pointwise on the physical values of v.
SpacetimeField compose_order(const NonlinearitySpec& F, std::span<const SpacetimeField> v, int n);

/// One monomial a·v_1^{α_1}⋯v_n^{α_n} of F_n.
struct AnkTerm {
  double a = 0.0;
  std::vector<int> alpha;  // alpha[m - 1] is the exponent of v_m
};

class EnumerationBudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// All (a, α) with Σ m α_m = n+1, Σ α_m >= p and a = b_{|α|}·multinomial(|α|; α).
/// Terms with b_{|α|} = 0 are omitted.
std::vector<AnkTerm> enumerate_ank(const NonlinearitySpec& F, int n, std::size_t budget = 1'000'000);

enum class MajorantVariant {
  plain,               // W = C F̃(W) + D ε
  inverted_potential,  // W = C/(1−δ) F̃(W) + D/(1−δ) ε
  scaled_potential,    // W = C F̃(W) + δ̃ εᵃ W + D ε
};

struct MajorantProblem {
  double C = 1.0;
  double D = 1.0;
  double delta = 0.0;        // λ C_{q,k}
  double delta_tilde = 0.0;  // λ̃ C_{q,k} (scaled_potential only)
  int a = 2;                 // scale exponent, positive integer
  int order = 8;
  MajorantVariant variant = MajorantVariant::plain;
};

/// Majorant coefficients w_1..w_N by the order-by-order recursion.
ScalarSeries solve_majorant(const MajorantProblem& problem, const NonlinearitySpec& F);

struct RadiusEstimate {
  double radius = 0.0;  // 1/ρ
  double rho = 0.0;
  int first_order = 0;  // fit window (orders of the nonzero coefficients used)
  int last_order = 0;
  bool polynomial = false;  // flagged: no nonzero coefficient beyond w_1
};

/// Root-test estimate of the convergence radius 1/ρ from the tail of w
/// (least-squares slope of ln w_n over the last up-to-7 nonzero orders).
RadiusEstimate radius_estimate(const ScalarSeries& w);

/// Σ_{n=1}^{N} εⁿ w_n for a scalar series.
double evaluate(const ScalarSeries& w, double eps);

}  // namespace tailwave
