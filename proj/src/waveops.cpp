#include "tailwave/waveops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "tailwave/parallel.hpp"

namespace tailwave {

void EvolutionParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be > 0");
  if (inner_max_iter < 1) throw std::invalid_argument("inner_max_iter must be >= 1");
  if (!(blowup_ceiling > 0.0)) throw std::invalid_argument("blowup_ceiling must be > 0");
}

std::vector<double> half_step_table(const NullGrid& g, const RadialProfile& V) {
  std::vector<double> table(2 * static_cast<std::size_t>(g.n_v()) + 1);
  for (std::size_t q = 0; q < table.size(); ++q) table[q] = V(0.5 * g.h() * static_cast<double>(q));
  return table;
}

namespace {

// Causal diamond march over the whole lattice.
//
// init[j]  : ψ on the t = 0 node of column j (r = jh); null when zero.
// kick[j]  : extra first-level term for the node of column j at t = h/2.
// sigma(k, q, ψ) : stored source r·S at node k (r = q h/2) given its ψ;
//                  called once per node in marching order.
// Cells use the mean of σ at W and E; the first level gets the half cell
// plus the mean of the two t = 0 values when data are present.
template <typename Sigma>
std::vector<double> march(const NullGrid& g, const std::vector<double>* init,
                          const std::vector<double>* kick, Sigma&& sigma) {
  const int nv = static_cast<int>(g.n_v());
  const double c = 0.125 * g.h() * g.h();
  std::vector<double> out(g.node_count());
  std::vector<double> sp(static_cast<std::size_t>(nv) + 1, 0.0);
  std::vector<double> sc(static_cast<std::size_t>(nv) + 1, 0.0);
  for (int i = 0; i < g.n_rows(); ++i) {
    const int a = i - nv;
    const int lo = g.row_begin(i);
    const int hi = g.row_end(i);
    const std::size_t off = g.row_offset(i) - static_cast<std::size_t>(lo);
    const std::size_t offE = i > 0 ? g.row_offset(i - 1) - static_cast<std::size_t>(g.row_begin(i - 1)) : 0;
    for (int j = lo; j < hi; ++j) {
      const std::size_t k = off + static_cast<std::size_t>(j);
      const int q = j - a;
      double psi;
      if (a + j == 0) {
        psi = init ? (*init)[static_cast<std::size_t>(j)] : 0.0;
      } else if (q == 0) {
        psi = 0.0;
      } else if (a + j == 1) {
        psi = 0.5 * c * (sc[j - 1] + sp[j]);
        if (init) psi += 0.5 * (out[k - 1] + out[offE + j]);
        if (kick) psi += (*kick)[static_cast<std::size_t>(j)];
      } else {
        psi = out[k - 1] + out[offE + j] - out[offE + j - 1] + c * (sc[j - 1] + sp[j]);
      }
      out[k] = psi;
      sc[j] = q == 0 ? 0.0 : sigma(k, q, psi);
    }
    std::swap(sp, sc);
  }
  return out;
}

bool potential_active(const RadialProfile& V, double lambda) { return lambda != 0.0 && !V.is_zero(); }

// Composite Gauss–Legendre nodes on [0, 1].
constexpr std::array<double, 4> kGlX = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                        0.9305681557970263};
constexpr std::array<double, 4> kGlW = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                        0.1739274225687269};

}  // namespace

SpacetimeField i0_apply(const RadialProfile& f, const RadialProfile& g, const GridPtr& grid) {
  const NullGrid& G = *grid;
  if (f.is_zero() && g.is_zero()) return SpacetimeField(grid);
  const int nv = static_cast<int>(G.n_v());
  const double h = G.h();
  // P_k = s f(s), Gc_k = ∫₀^{s} σ g(σ) dσ at s = kh.
  std::vector<double> P(static_cast<std::size_t>(nv) + 1, 0.0);
  std::vector<double> Gc(static_cast<std::size_t>(nv) + 1, 0.0);
  double prev = 0.0;
  for (int k = 0; k <= nv; ++k) {
    const double s = k * h;
    P[k] = f.is_zero() ? 0.0 : s * f(s);
    if (g.is_zero() || k == 0) continue;
    const double mid = s - 0.5 * h;
    const double cur = s * g(s);
    Gc[k] = Gc[k - 1] + h / 6.0 * (prev + 4.0 * mid * g(mid) + cur);
    prev = cur;
  }
  std::vector<double> out(G.node_count());
  parallel_for(static_cast<std::size_t>(G.n_rows()), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ii = lo; ii < hi; ++ii) {
      const int i = static_cast<int>(ii);
      const int a = i - nv;
      const int aa = std::abs(a);
      const double sgn = a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0);
      std::size_t k = G.row_offset(i);
      for (int j = G.row_begin(i); j < G.row_end(i); ++j, ++k) {
        out[k] = 0.5 * ((P[j] - sgn * P[aa]) + (Gc[j] - Gc[aa]));
      }
    }
  });
  return SpacetimeField(grid, std::move(out));
}

SpacetimeField l0_apply(const SpacetimeField& source) {
  const GridPtr& gp = source.grid_ptr();
  if (source.is_zero()) return SpacetimeField(gp);
  const auto s = source.values();
  return SpacetimeField(gp, march(*gp, nullptr, nullptr, [&](std::size_t k, int, double) { return s[k]; }));
}

double l0_oracle(const SpacetimeField& source, double t, double r) {
  const NullGrid& g = source.grid();
  const double h = g.h();
  if (source.is_zero() || t <= 0.0) return 0.0;
  if (r < 0.0) throw OutOfDomainError("l0_oracle: negative radius");
  const double rr = r > 0.0 ? r : 1e-3 * h;
  const int nv = static_cast<int>(g.n_v());

  // Cell constant S on the lattice square with top corner N = (i, j).
  auto cell_value = [&](double up, double vp) {
    const int i = nv + static_cast<int>(std::ceil(up / h));
    const int j = static_cast<int>(std::ceil(vp / h));
    if (!g.contains(i, j) || g.r_half_steps(i, j) == 0) return 0.0;
    if (!g.contains(i, j - 1) || !g.contains(i - 1, j)) return 0.0;
    return 0.5 * (source.psi(i, j - 1) + source.psi(i - 1, j)) / g.r(i, j);
  };

  // ∫ ρ S dρ over [|r − s|, r + s] at fixed τ, split at every lattice line.
  std::vector<double> cuts;
  auto inner = [&](double tau) {
    const double s = t - tau;
    const double lo = std::abs(rr - s);
    const double hi = rr + s;
    cuts.clear();
    cuts.push_back(lo);
    for (double m = std::floor((tau - hi) / h) + 1.0; m * h < tau - lo; m += 1.0) cuts.push_back(tau - m * h);
    for (double n = std::floor((tau + lo) / h) + 1.0; n * h < tau + hi; n += 1.0) cuts.push_back(n * h - tau);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t q = 1; q < cuts.size(); ++q) {
      const double ra = cuts[q - 1];
      const double rb = cuts[q];
      if (rb <= ra) continue;
      const double rm = 0.5 * (ra + rb);
      acc += cell_value(tau - rm, tau + rm) * 0.5 * (rb * rb - ra * ra);
    }
    return acc;
  };

  // Within a slab of height h/2 the integrand is quadratic in τ, so two
  // Gauss points per slab are exact.
  const double gx[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  double psi = 0.0;
  const auto slabs = static_cast<long>(std::ceil(t / (0.5 * h) - 1e-9));
  for (long k = 0; k < slabs; ++k) {
    const double t0 = 0.5 * h * static_cast<double>(k);
    const double t1 = std::min(t, 0.5 * h * static_cast<double>(k + 1));
    const double w = t1 - t0;
    for (double x : gx) psi += 0.5 * w * inner(t0 + x * w);
  }
  return 0.5 * psi / rr;
}

double l0_oracle(const std::function<double(double, double)>& S, double t, double r, int panels) {
  if (t <= 0.0) return 0.0;
  if (r < 0.0) throw OutOfDomainError("l0_oracle: negative radius");
  panels = std::max(panels, 1);
  double total = 0.0;
  const double dt = t / panels;
  for (int pt = 0; pt < panels; ++pt) {
    for (std::size_t a = 0; a < kGlX.size(); ++a) {
      const double tau = (pt + kGlX[a]) * dt;
      const double s = t - tau;
      double in;
      if (r == 0.0) {
        in = s * S(tau, s);  // lim ½∫ρS dρ / r over [s − r, s + r]
      } else {
        const double lo = std::abs(r - s);
        const double hi = r + s;
        const double dr = (hi - lo) / panels;
        in = 0.0;
        for (int pr = 0; pr < panels; ++pr) {
          for (std::size_t b = 0; b < kGlX.size(); ++b) {
            const double rho = lo + (pr + kGlX[b]) * dr;
            in += kGlW[b] * dr * rho * S(tau, rho);
          }
        }
        in *= 0.5 / r;
      }
      total += kGlW[a] * dt * in;
    }
  }
  return total;
}

SpacetimeField lv_apply(const SpacetimeField& source, const RadialProfile& V,
                        const EvolutionParams& params, LvMethod method, int* iterations) {
  params.validate();
  if (iterations) *iterations = 0;
  if (!potential_active(V, params.lambda)) return l0_apply(source);
  const GridPtr& gp = source.grid_ptr();
  if (source.is_zero()) return SpacetimeField(gp);
  const double lam = params.lambda;

  if (method == LvMethod::stencil) {
    const auto s = source.values();
    const std::vector<double> Vt = half_step_table(*gp, V);
    return SpacetimeField(gp, march(*gp, nullptr, nullptr, [&](std::size_t k, int q, double psi) {
                            return s[k] + (-lam) * (Vt[q] * psi);
                          }));
  }

  const auto Vfn = [&V](double r) { return V(r); };
  SpacetimeField x(gp);
  for (int it = 1; it <= params.inner_max_iter; ++it) {
    SpacetimeField next = l0_apply(axpy(source, -lam, multiply_radial(x, Vfn)));
    const double diff = max_abs_diff(next, x);
    x = std::move(next);
    if (diff <= params.inner_tol) {
      if (iterations) *iterations = it;
      return x;
    }
  }
  std::ostringstream os;
  os << "lv_apply: Picard variant did not reach inner_tol=" << params.inner_tol << " in "
     << params.inner_max_iter << " sweeps";
  throw NonConvergenceError(os.str());
}

SpacetimeField iv_apply(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                        const EvolutionParams& params, const GridPtr& grid, IvRoute route) {
  params.validate();
  if (route == IvRoute::marched) {
    return solve_direct(f, g, V, NonlinearitySpec::none(), params, grid, DirectMode::marched);
  }
  SpacetimeField u0 = i0_apply(f, g, grid);
  if (!potential_active(V, params.lambda) || u0.is_zero()) return u0;
  const auto Vfn = [&V](double r) { return V(r); };
  return axpy(u0, -params.lambda, lv_apply(multiply_radial(u0, Vfn), V, params));
}

SpacetimeField solve_direct(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                            const NonlinearitySpec& F, const EvolutionParams& params,
                            const GridPtr& grid, DirectMode mode) {
  params.validate();
  const NullGrid& G = *grid;
  const double h = G.h();
  const double lam = potential_active(V, params.lambda) ? params.lambda : 0.0;
  const std::vector<double> Vt = lam != 0.0 ? half_step_table(G, V) : std::vector<double>{};
  const bool nonlinear = !F.is_zero();
  const double ceiling = params.blowup_ceiling;

  auto source_of = [&](int q, double psi) {
    const double r = 0.5 * h * q;
    const double u = psi / r;
    if (!(std::abs(u) <= ceiling)) {
      std::ostringstream os;
      os << "solve_direct: |u| = " << std::abs(u) << " exceeds the blow-up ceiling " << ceiling
         << " at r = " << r;
      throw BlowUpError(os.str());
    }
    double sig = nonlinear ? r * F(u) : 0.0;
    if (lam != 0.0) sig += (-lam) * (Vt[q] * psi);
    return sig;
  };

  if (mode == DirectMode::split) {
    SpacetimeField u0 = i0_apply(f, g, grid);
    if (!nonlinear && lam == 0.0) return u0;
    const auto base = u0.values();
    const bool has_base = !u0.is_zero();
    std::vector<double> w = march(G, nullptr, nullptr, [&](std::size_t k, int q, double psi) {
      return source_of(q, has_base ? base[k] + psi : psi);
    });
    if (has_base) {
      for (std::size_t k = 0; k < w.size(); ++k) w[k] += base[k];
    }
    return SpacetimeField(grid, std::move(w));
  }

  const int nv = static_cast<int>(G.n_v());
  std::vector<double> init(static_cast<std::size_t>(nv) + 1, 0.0);
  std::vector<double> kick(static_cast<std::size_t>(nv) + 1, 0.0);
  for (int j = 0; j <= nv; ++j) {
    const double r0 = j * h;
    init[j] = f.is_zero() ? 0.0 : r0 * f(r0);
    const double r1 = (j - 0.5) * h;
    kick[j] = (j == 0 || g.is_zero()) ? 0.0 : 0.5 * h * r1 * g(r1);
  }
  return SpacetimeField(grid, march(G, &init, &kick,
                                    [&](std::size_t, int q, double psi) { return source_of(q, psi); }));
}

}  // namespace tailwave
