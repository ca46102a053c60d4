#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tailwave/field.hpp"
#include "tailwave/profiles.hpp"
#include "tailwave/series.hpp"
#include "tailwave/waveops.hpp"

namespace tailwave {

/// Scalar parameters of a run.  NaN marks "not applicable".
struct RunParams {
  double lambda = 0.0;
  double lambda_tilde = std::numeric_limits<double>::quiet_NaN();
  int a = 0;
  double m = std::numeric_limits<double>::infinity();  // data decay (∞ for compact data)
  double k = std::numeric_limits<double>::infinity();  // potential decay
  double p = std::numeric_limits<double>::infinity();  // nonlinearity power
  double q = 0.0;                                      // norm exponent of the run
  double delta = std::numeric_limits<double>::quiet_NaN();
  double delta_prime = std::numeric_limits<double>::quiet_NaN();
};

struct SchemeOptions {
  int N = 5;
  /// Norm exponent for norms and ratios; 0 selects the predicted exponent.
  double q = 0.0;
  /// Early stop once ‖x_n − x_{n−1}‖_(1,q) < tol (0 disables).
  double tol = 0.0;
  /// Keep every iterate (needed by reconstruct); otherwise only the last two.
  bool keep_all = true;
  EvolutionParams evo;
};

/// Iterates u_n or perturbation orders v_n with their diagnostics.
///
/// norms[i], diffs[i], ratios[i] refer to index first_index + i.  For
/// iterations diffs are ‖u_n − u_{n−1}‖; for series they are the order
/// norms ‖v_n‖ (the partial-sum increments at unit amplitude).  ratios[i]
/// is diffs[i]/diffs[i−1] (NaN when undefined).
struct SchemeRun {
  std::string scheme_id;
  bool series = false;
  int first_index = 0;
  int last_index = -1;
  bool early_stopped = false;
  RunParams params;
  std::vector<double> norms;
  std::vector<double> diffs;
  std::vector<double> ratios;
  std::vector<std::string> notes;

  /// Stored elements with their indices (all of them when keep_all).
  std::vector<SpacetimeField> elements;
  std::vector<int> indices;

  bool has(int n) const;
  const SpacetimeField& element(int n) const;
  const SpacetimeField& last() const { return elements.back(); }
  int count() const { return last_index - first_index + 1; }
  double norm_of(int n) const;
  double ratio_of(int n) const;
  /// Largest defined ratio over indices >= from.
  double max_ratio(int from = 0) const;
};

/// Data decay power m implied by the profile metadata (∞ for compact data).
double data_decay(const RadialProfile& f, const RadialProfile& g);

/// u_{−1} = 0, u_n = I₀(f,g) − λL₀(V u_{n−1}), n = 0..N.
SchemeRun picard_linear(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                        double lambda, const GridPtr& grid, const SchemeOptions& opt);

/// v₀ = I₀(f,g), v_{n+1} = −L₀(V v_n), n = 0..N.
SchemeRun perturb_linear(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                         const GridPtr& grid, const SchemeOptions& opt);

/// u₀ = 0, u_{n+1} = I₀(f,g) + L₀(F(u_n)), n up to N.
SchemeRun picard_nonlinear(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                           const GridPtr& grid, const SchemeOptions& opt);

/// v₁ = I₀(f,g), v_{n+1} = L₀(F_n(v₁..v_n)), orders 1..N (unit amplitude data).
SchemeRun perturb_nonlinear(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                            const GridPtr& grid, const SchemeOptions& opt);

enum class PotentialMode { perturbative, nonperturbative };

/// u₀ = 0 and either u_{n+1} = I₀ − λL₀(Vu_n) + L₀(F(u_n)) (perturbative) or
/// u_{n+1} = I_V(f,g) + L_V(F(u_n)) (nonperturbative).
SchemeRun picard_full(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                      double lambda, const NonlinearitySpec& F, const GridPtr& grid, PotentialMode mode,
                      const SchemeOptions& opt);

struct FullSeriesSpec {
  PotentialMode mode = PotentialMode::perturbative;
  double lambda = 0.0;        // nonperturbative mode
  double lambda_tilde = 0.0;  // perturbative mode, λ = εᵃ λ̃
  int a = 0;                  // perturbative mode; 0 selects p − 1
};

/// nonperturbative: v₁ = I_V(f,g), v_{n+1} = L_V(F_n);
/// perturbative: v₁ = I₀(f,g), v_{n+1} = −λ̃L₀(V v_{n+1−a}) + L₀(F_n), v_{n≤0} = 0.
SchemeRun perturb_full(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                       const NonlinearitySpec& F, const GridPtr& grid, const FullSeriesSpec& spec,
                       const SchemeOptions& opt);

/// Σ_{first ≤ m ≤ n} εᵐ v_m of a series run.
SpacetimeField reconstruct(const SchemeRun& run, double eps, int n);

}  // namespace tailwave
