#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailwave/field.hpp"
#include "tailwave/norms.hpp"
#include "tailwave/profiles.hpp"
#include "tailwave/schemes.hpp"
#include "tailwave/series.hpp"

namespace tailwave {

struct FitWindow {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// u(t, probe_r) ≈ coefficient · t^{−exponent} over the window.
struct DecayFit {
  double probe_r = 0.0;
  FitWindow window;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double coefficient = std::numeric_limits<double>::quiet_NaN();
  /// max relative residual |u − c t^{−q}| / |c t^{−q}| over the window
  double eta = std::numeric_limits<double>::quiet_NaN();
  int samples = 0;
  bool zero_signal = false;  // some sample vanished (e.g. Huygens)
  bool sign_change = false;  // oscillatory window, not a power law
  std::string flag;

  bool ok() const { return flag.empty(); }
  double model(double t) const;
};

/// Lattice times t = jh − probe_r inside the window (samples are exact nodes).
std::vector<double> sample_times(const NullGrid& grid, double probe_r, FitWindow window);

/// Log-log least squares of |y| against t.  Samples with |y| <= zero_floor
/// count as zero and flag the fit.
DecayFit fit_power_law(std::span<const double> t, std::span<const double> y, double probe_r,
                       double zero_floor = 0.0);

/// Fit of u(·, probe_r) on the window; zero means |u| <= 1e-12·max|u|.
DecayFit fit_power_law(const SpacetimeField& u, double probe_r, FitWindow window);

/// [t_max/4, 3 t_max/4] of the grid's reach at probe_r.
FitWindow default_window(const NullGrid& grid, double probe_r);

/// Smallest t of the timelike regime t >= 2(s − 2) probe_r, s = max of the finite powers.
double timelike_start(double probe_r, double m, double k, double p);

/// v₁ = −L₀(V·I₀(f,g)) and its fit; c₁ is the fitted coefficient (λ-free).
DecayFit tail_coefficient_first_order(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                                      const GridPtr& grid, double probe_r, FitWindow window);

/// v_p of the nonlinear hierarchy (or of the εᵃ hierarchy when V is given) and its fit.
DecayFit tail_coefficient_order_p(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                                  const RadialProfile* V, double lambda_tilde, int a, const GridPtr& grid,
                                  double probe_r, FitWindow window);

struct RemainderParams {
  EquationClass cls = EquationClass::linear;
  double lambda = 0.0;
  double C_pk = 0.0;      // linear: C_{p,k}
  double C_m = 5.0;
  double data = 0.0;      // linear: f₀ + f₁ + g₀
  double delta = 0.0;     // nonlinear: δ; full: δ (δ′ = 2δ − δ² is formed here)
  double eps = 0.0;       // nonlinear / full amplitude
  double q = 3.0;         // decay exponent of the norm
  bool empirical_constant = false;
};

/// Pointwise bound on |u − u_n|(t, r).
///   linear:    (C_{p,k}λ)^{n+1}/(1 − C_{p,k}λ) · C_m·data / (⟨t+r⟩⟨t−r⟩^{q−1})
///   nonlinear: δⁿ/(1−δ) · 3C_mε / (⟨t+r⟩⟨t−r⟩^{q−1})
///   full:      δ′ⁿ/(1−δ′) · 3C_mε / (⟨t+r⟩⟨t−r⟩^{q−1})
/// Throws std::domain_error when the contraction constant is >= 1.
double remainder_bound(const RemainderParams& params, int n, double t, double r);

struct RemainderCheck {
  bool pass = true;
  std::size_t nodes = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max |u_ref − u_n| / bound
  double worst_t = 0.0, worst_r = 0.0;
};

/// Checks |u_ref − u_n| <= bound at every node with t − r >= min_retarded.
RemainderCheck check_remainder(const SpacetimeField& u_ref, const SpacetimeField& u_n,
                               const RemainderParams& params, int n, double min_retarded = 1.0);

struct Certification {
  bool certified = false;
  bool skipped = false;
  FitWindow window;
  double eta = 0.0;
  double multiple = 3.0;
  double max_rel_error = 0.0;  // max |u_ref − leading| / |leading|
  double margin = 0.0;         // multiple·η / max_rel_error
  std::string note;
};

/// |u_ref − scale·c·t^{−q}| <= multiple·η·|scale·c·t^{−q}| on the fit window.
/// scale is λ (linear tail) or εᵖ (nonlinear tail).  Skipped when the run
/// is outside the contraction regime.
Certification certify_asymptotics(const SchemeRun& run, const SpacetimeField& u_ref, const DecayFit& fit,
                                  double scale, double multiple = 3.0);

}  // namespace tailwave
