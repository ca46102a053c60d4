#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tailwave/grid.hpp"

namespace tailwave {

/// Samples of ψ = r·u on a NullGrid.
///
/// Every field stores r times the physical scalar, including sources: a
/// source S is held as r·S, which is exactly what the diamond stencil
/// consumes.  Axis nodes (r = 0) hold 0.  A field constructed without
/// values is identically zero and owns no storage.
class SpacetimeField {
 public:
  SpacetimeField() = default;
  /// Identically zero field (no allocation).
  explicit SpacetimeField(GridPtr grid) : grid_(std::move(grid)) {}
  SpacetimeField(GridPtr grid, std::vector<double> psi);

  static SpacetimeField zeros_allocated(GridPtr grid);
  /// ψ = r·fn(t, r) at every node.
  static SpacetimeField from_physical(GridPtr grid, const std::function<double(double, double)>& fn);

  const NullGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool is_zero() const { return psi_.empty(); }

  double psi(int i, int j) const { return psi_.empty() ? 0.0 : psi_[grid_->index(i, j)]; }
  double psi_at(std::size_t k) const { return psi_.empty() ? 0.0 : psi_[k]; }
  std::span<const double> values() const { return psi_; }
  /// Mutable access; allocates zeros if the field was identically zero.
  std::span<double> mutable_values();

  /// Physical value u = ψ/r at a node; on the axis the one-sided
  /// second-order limit ∂_r ψ(t, 0) is used.
  double physical(int i, int j) const;

  /// Physical value at an arbitrary (t, r) by bilinear interpolation of ψ in
  /// (u, v) divided by r.  For r < h/2 the axis limit is returned.
  double at(double t, double r) const;
  /// Interpolated ψ(t, r).
  double psi_interp(double t, double r) const;

  /// True when every stored sample is finite.
  bool all_finite() const;

 private:
  GridPtr grid_;
  std::vector<double> psi_;
};

/// Point evaluation of u = ψ/r (free-function form).
double field_at(const SpacetimeField& field, double t, double r);

void require_same_grid(const SpacetimeField& a, const SpacetimeField& b, const char* where);

// Pointwise algebra.  All helpers preserve the "zero field owns no storage"
// convention where the result is structurally zero.
SpacetimeField operator+(const SpacetimeField& a, const SpacetimeField& b);
SpacetimeField operator-(const SpacetimeField& a, const SpacetimeField& b);
SpacetimeField operator*(double s, const SpacetimeField& a);
/// a + s·b
SpacetimeField axpy(const SpacetimeField& a, double s, const SpacetimeField& b);
/// Source r·(V u) for a radial multiplier V sampled at the node radius.
SpacetimeField multiply_radial(const SpacetimeField& a, const std::function<double(double)>& V);
/// Stored r·fn(u) for the physical value u of a.
SpacetimeField map_physical(const SpacetimeField& a, const std::function<double(double)>& fn);

/// max over nodes of |u_a − u_b| in physical values (r > 0 nodes plus axis limits).
double max_abs_diff(const SpacetimeField& a, const SpacetimeField& b);
/// max over nodes of |u|.
double max_abs(const SpacetimeField& a);

/// CSV dump `t,r,u,psi`, row-major over grid nodes, 17 significant digits.
/// stride > 1 keeps every stride-th row and column.
void write_field_csv(std::ostream& os, const SpacetimeField& field, int stride = 1);

}  // namespace tailwave
