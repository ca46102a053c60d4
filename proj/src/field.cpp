#include "tailwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tailwave/parallel.hpp"

namespace tailwave {

namespace {

constexpr double kDomainSlack = 1e-9;

// Applies body(i, j, k) over all nodes, rows distributed across workers.
template <typename Body>
void for_each_node(const NullGrid& g, Body&& body) {
  parallel_for(static_cast<std::size_t>(g.n_rows()), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ii = lo; ii < hi; ++ii) {
      const int i = static_cast<int>(ii);
      std::size_t k = g.row_offset(i);
      for (int j = g.row_begin(i); j < g.row_end(i); ++j, ++k) body(i, j, k);
    }
  });
}

}  // namespace

SpacetimeField::SpacetimeField(GridPtr grid, std::vector<double> psi)
    : grid_(std::move(grid)), psi_(std::move(psi)) {
  if (!psi_.empty() && psi_.size() != grid_->node_count()) {
    throw std::invalid_argument("SpacetimeField: value count does not match grid");
  }
}

SpacetimeField SpacetimeField::zeros_allocated(GridPtr grid) {
  const std::size_t n = grid->node_count();
  return SpacetimeField(std::move(grid), std::vector<double>(n, 0.0));
}

SpacetimeField SpacetimeField::from_physical(GridPtr grid,
                                             const std::function<double(double, double)>& fn) {
  SpacetimeField out = zeros_allocated(grid);
  const NullGrid& g = *grid;
  double* data = out.psi_.data();
  for_each_node(g, [&](int i, int j, std::size_t k) {
    const double r = g.r(i, j);
    data[k] = r == 0.0 ? 0.0 : r * fn(g.t(i, j), r);
  });
  return out;
}

std::span<double> SpacetimeField::mutable_values() {
  if (psi_.empty()) psi_.assign(grid_->node_count(), 0.0);
  return psi_;
}

double SpacetimeField::physical(int i, int j) const {
  if (psi_.empty()) return 0.0;
  const int rh = grid_->r_half_steps(i, j);
  if (rh > 0) return psi_[grid_->index(i, j)] / grid_->r(i, j);
  const double h = grid_->h();
  const bool has1 = grid_->contains(i - 1, j + 1);
  const bool has2 = grid_->contains(i - 2, j + 2);
  if (has1 && has2) {
    return (4.0 * psi(i - 1, j + 1) - psi(i - 2, j + 2)) / (2.0 * h);
  }
  if (has1) return psi(i - 1, j + 1) / h;
  if (grid_->contains(i - 1, j)) return psi(i - 1, j) / (0.5 * h);
  return 0.0;
}

double SpacetimeField::psi_interp(double t, double r) const {
  const NullGrid& g = *grid_;
  const double h = g.h();
  const double tol = kDomainSlack * std::max(1.0, g.t_max());
  if (t < -tol || t > g.t_max() + tol || r < -tol || t + r > g.v_max() + tol) {
    std::ostringstream os;
    os << "field query (t=" << t << ", r=" << r << ") outside grid hull";
    throw OutOfDomainError(os.str());
  }
  if (psi_.empty()) return 0.0;
  const double x = (t - r) / h + static_cast<double>(g.n_v());
  const double y = (t + r) / h;
  int i0 = std::clamp(static_cast<int>(std::floor(x)), 0, g.n_rows() - 2);
  int j0 = std::clamp(static_cast<int>(std::floor(y)), 0, static_cast<int>(g.n_v()) - 1);
  const double s = x - i0;
  const double w = y - j0;
  const bool h00 = g.contains(i0, j0);
  const bool h10 = g.contains(i0 + 1, j0);
  const bool h01 = g.contains(i0, j0 + 1);
  const bool h11 = g.contains(i0 + 1, j0 + 1);
  const double c00 = h00 ? psi(i0, j0) : 0.0;
  const double c10 = h10 ? psi(i0 + 1, j0) : 0.0;
  const double c01 = h01 ? psi(i0, j0 + 1) : 0.0;
  const double c11 = h11 ? psi(i0 + 1, j0 + 1) : 0.0;
  const int missing = !h00 + !h10 + !h01 + !h11;
  if (missing == 0) {
    return (1 - s) * (1 - w) * c00 + s * (1 - w) * c10 + (1 - s) * w * c01 + s * w * c11;
  }
  if (missing == 1) {
    // Linear interpolation on the triangle of available corners.
    if (!h11) return c00 + (c10 - c00) * s + (c01 - c00) * w;
    if (!h00) return c11 - (c11 - c01) * (1 - s) - (c11 - c10) * (1 - w);
    if (!h10) return c00 + (c11 - c01) * s + (c01 - c00) * w;
    return c00 + (c10 - c00) * s + (c11 - c10) * w;
  }
  // Only lattice corners of the hull reach this point; snap to the nearest stored node.
  const int ii = i0 + (s > 0.5 ? 1 : 0);
  const int jj = j0 + (w > 0.5 ? 1 : 0);
  if (g.contains(ii, jj)) return psi(ii, jj);
  throw OutOfDomainError("field query falls outside the stored lattice");
}

double SpacetimeField::at(double t, double r) const {
  const double h = grid_->h();
  if (r >= 0.5 * h) return psi_interp(t, r) / r;
  if (r < -kDomainSlack * std::max(1.0, grid_->t_max())) {
    throw OutOfDomainError("field query at negative radius");
  }
  // Axis limit u(t, 0) = ∂_r ψ(t, 0), one-sided second order.
  const double v_room = grid_->v_max() - t;
  if (v_room >= 2.0 * h) {
    return (4.0 * psi_interp(t, h) - psi_interp(t, 2.0 * h)) / (2.0 * h);
  }
  if (v_room >= h) return psi_interp(t, h) / h;
  return psi_interp(t, 0.5 * h) / (0.5 * h);
}

double field_at(const SpacetimeField& field, double t, double r) { return field.at(t, r); }

bool SpacetimeField::all_finite() const {
  return std::all_of(psi_.begin(), psi_.end(), [](double x) { return std::isfinite(x); });
}

void require_same_grid(const SpacetimeField& a, const SpacetimeField& b, const char* where) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_lattice(b.grid())) {
    throw std::invalid_argument(std::string(where) + ": fields live on different grids");
  }
}

SpacetimeField axpy(const SpacetimeField& a, double s, const SpacetimeField& b) {
  require_same_grid(a, b, "axpy");
  if (b.is_zero() || s == 0.0) return a;
  if (a.is_zero() && s == 1.0) return b;
  std::vector<double> out(a.grid().node_count());
  const auto bv = b.values();
  if (a.is_zero()) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = s * bv[k];
  } else {
    const auto av = a.values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = av[k] + s * bv[k];
  }
  return SpacetimeField(a.grid_ptr(), std::move(out));
}

SpacetimeField operator+(const SpacetimeField& a, const SpacetimeField& b) { return axpy(a, 1.0, b); }
SpacetimeField operator-(const SpacetimeField& a, const SpacetimeField& b) { return axpy(a, -1.0, b); }

SpacetimeField operator*(double s, const SpacetimeField& a) {
  if (a.is_zero() || s == 0.0) return SpacetimeField(a.grid_ptr());
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& x : out) x *= s;
  return SpacetimeField(a.grid_ptr(), std::move(out));
}

SpacetimeField multiply_radial(const SpacetimeField& a, const std::function<double(double)>& V) {
  if (a.is_zero()) return SpacetimeField(a.grid_ptr());
  const NullGrid& g = a.grid();
  // Lattice radii are multiples of h/2; sample V once per radius.
  int max_half = 0;
  for (int i = 0; i < g.n_rows(); ++i) {
    max_half = std::max(max_half, g.r_half_steps(i, g.row_end(i) - 1));
  }
  std::vector<double> table(static_cast<std::size_t>(max_half) + 1);
  for (int q = 0; q <= max_half; ++q) table[q] = V(0.5 * g.h() * q);
  std::vector<double> out(g.node_count());
  const auto av = a.values();
  for_each_node(g, [&](int i, int j, std::size_t k) { out[k] = table[g.r_half_steps(i, j)] * av[k]; });
  return SpacetimeField(a.grid_ptr(), std::move(out));
}

SpacetimeField map_physical(const SpacetimeField& a, const std::function<double(double)>& fn) {
  const NullGrid& g = a.grid();
  std::vector<double> out(g.node_count());
  const auto av = a.values();
  const bool zero = a.is_zero();
  for_each_node(g, [&](int i, int j, std::size_t k) {
    const double r = g.r(i, j);
    if (r == 0.0) {
      out[k] = 0.0;
      return;
    }
    const double u = zero ? 0.0 : av[k] / r;
    out[k] = r * fn(u);
  });
  return SpacetimeField(a.grid_ptr(), std::move(out));
}

double max_abs_diff(const SpacetimeField& a, const SpacetimeField& b) {
  require_same_grid(a, b, "max_abs_diff");
  const NullGrid& g = a.grid();
  const int rows = g.n_rows();
  std::vector<double> row_max(static_cast<std::size_t>(rows), 0.0);
  parallel_for(static_cast<std::size_t>(rows), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ii = lo; ii < hi; ++ii) {
      const int i = static_cast<int>(ii);
      double m = 0.0;
      for (int j = g.row_begin(i); j < g.row_end(i); ++j) {
        m = std::max(m, std::abs(a.physical(i, j) - b.physical(i, j)));
      }
      row_max[ii] = m;
    }
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

double max_abs(const SpacetimeField& a) { return max_abs_diff(a, SpacetimeField(a.grid_ptr())); }

void write_field_csv(std::ostream& os, const SpacetimeField& field, int stride) {
  const NullGrid& g = field.grid();
  stride = std::max(stride, 1);
  os << "t,r,u,psi\n";
  char buf[160];
  for (int i = 0; i < g.n_rows(); i += stride) {
    for (int j = g.row_begin(i); j < g.row_end(i); j += stride) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", g.t(i, j), g.r(i, j),
                    field.physical(i, j), field.psi(i, j));
      os << buf;
    }
  }
}

}  // namespace tailwave
