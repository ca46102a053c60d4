#pragma once

#include <functional>
#include <stdexcept>

#include "tailwave/field.hpp"
#include "tailwave/profiles.hpp"
#include "tailwave/series.hpp"

namespace tailwave {

struct EvolutionParams {
  double lambda = 0.0;
  /// Stop tolerance (max physical change) of the inner Picard variant.
  double inner_tol = 1e-12;
  int inner_max_iter = 500;
  /// solve_direct aborts once |u| exceeds this.
  double blowup_ceiling = 1e6;

  void validate() const;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BlowUpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Free solution of □u = 0 with u(0) = f, ∂_t u(0) = g, by d'Alembert's
/// formula on the odd extensions of r f and r g.  The g-integral is a
/// cumulative composite Simpson sum on the lattice radii.
SpacetimeField i0_apply(const RadialProfile& f, const RadialProfile& g, const GridPtr& grid);

/// Solution of □u = S with null data by diamond marching.  The cell source
/// is the mean of the stored r·S at the two mid-level nodes (W and E); on the
/// first level above t = 0 the half cell is used.
SpacetimeField l0_apply(const SpacetimeField& source);

/// Retarded integral ψ = ½∫₀ᵗdτ∫_{|r−s|}^{r+s} ρ S dρ (s = t − τ), divided by r,
/// with S taken constant on each lattice cell (the same cell means as
/// l0_apply).  Direct quadrature, O(N²) per point; test use only.
double l0_oracle(const SpacetimeField& source, double t, double r);

/// Same retarded integral for a callable S(t, r), composite Gauss–Legendre
/// with `panels` panels per direction.
double l0_oracle(const std::function<double(double, double)>& S, double t, double r, int panels = 64);

enum class LvMethod {
  stencil,  // potential term inside the marching stencil
  picard,   // x ← L₀(S − λVx) with whole-field sweeps
};

/// v = L₀(S) − λL₀(V v).  With λ = 0 or V ≡ 0 the result is l0_apply(S).
/// `iterations` (optional) receives the Picard sweep count (0 for the stencil).
SpacetimeField lv_apply(const SpacetimeField& source, const RadialProfile& V,
                        const EvolutionParams& params, LvMethod method = LvMethod::stencil,
                        int* iterations = nullptr);

enum class IvRoute {
  superposition,  // I₀(f,g) − λ·L_V(V·I₀(f,g))
  marched,        // march □u + λVu = 0 directly from the data
};

/// Solution of □u + λVu = 0 with data (f, g).
SpacetimeField iv_apply(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                        const EvolutionParams& params, const GridPtr& grid,
                        IvRoute route = IvRoute::superposition);

enum class DirectMode {
  /// u = I₀(f,g) + w; w marched with source r·F(u) − λV·ru.  This is the
  /// discrete fixed point shared with every iteration scheme.
  split,
  /// ψ marched from the data with a Taylor first level (second order).
  marched,
};

/// Reference solution of □u + λVu = F(u) with data (f, g).
SpacetimeField solve_direct(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                            const NonlinearitySpec& F, const EvolutionParams& params,
                            const GridPtr& grid, DirectMode mode = DirectMode::split);

/// V sampled at r = q·h/2 for every half-step radius of the lattice.
std::vector<double> half_step_table(const NullGrid& grid, const RadialProfile& V);

}  // namespace tailwave
