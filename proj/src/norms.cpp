#include "tailwave/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailwave/parallel.hpp"

namespace tailwave {

double norm_space(const RadialProfile& f, double m, std::span<const double> mesh) {
  if (mesh.empty()) throw std::invalid_argument("norm_space: empty mesh");
  double best = 0.0;
  for (double r : mesh) {
    const double x = std::pow(bracket(r), m) * std::abs(f(r));
    if (!std::isfinite(x)) throw std::domain_error("norm_space: non-finite sample");
    best = std::max(best, x);
  }
  return best;
}

double norm_space(std::span<const double> r, std::span<const double> values, double m) {
  if (r.empty()) throw std::invalid_argument("norm_space: empty mesh");
  if (r.size() != values.size()) throw std::invalid_argument("norm_space: size mismatch");
  double best = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double x = std::pow(bracket(r[k]), m) * std::abs(values[k]);
    if (!std::isfinite(x)) throw std::domain_error("norm_space: non-finite sample");
    best = std::max(best, x);
  }
  return best;
}

double norm_spacetime_where(const SpacetimeField& u, double q, double p,
                            const std::function<bool(double, double)>& keep) {
  if (u.is_zero()) return 0.0;
  const NullGrid& g = u.grid();
  const int nv = static_cast<int>(g.n_v());
  // ⟨t+r⟩ = 1 + v_j and ⟨t−r⟩ = 1 + |u_i| separate the weight.
  std::vector<double> wv(static_cast<std::size_t>(nv) + 1);
  for (int j = 0; j <= nv; ++j) wv[j] = std::pow(bracket(g.v(j)), q);
  std::vector<double> row_best(static_cast<std::size_t>(g.n_rows()), 0.0);
  parallel_for(row_best.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ii = lo; ii < hi; ++ii) {
      const int i = static_cast<int>(ii);
      const double wu = std::pow(bracket(g.u(i)), p - q);
      double best = 0.0;
      for (int j = g.row_begin(i); j < g.row_end(i); ++j) {
        // axis values are extrapolated, not stored; they would add a
        // first-order error wherever the field has a kink near r = 0
        if (g.r_half_steps(i, j) == 0) continue;
        if (keep && !keep(g.t(i, j), g.r(i, j))) continue;
        best = std::max(best, wv[j] * wu * std::abs(u.physical(i, j)));
      }
      row_best[ii] = best;
    }
  });
  return *std::max_element(row_best.begin(), row_best.end());
}

double norm_spacetime(const SpacetimeField& u, double q, double p) {
  return norm_spacetime_where(u, q, p, {});
}

double c_m(double m) {
  if (!(m > 2.0)) throw std::domain_error("c_m: requires m > 2");
  return std::max(9.0 / (2.0 * (m - 2.0)), 5.0);
}

double c_pq(double p, double q) {
  if (!(p > 1.0) || !(q > 1.0)) throw std::domain_error("c_pq: requires p > 1 and q > 1");
  return 2.0 + 8.0 / (p - 1.0) + 2.0 / (q - 1.0);
}

const char* to_string(EquationClass cls) {
  switch (cls) {
    case EquationClass::linear: return "linear";
    case EquationClass::nonlinear: return "nonlinear";
    case EquationClass::full: return "full";
  }
  return "?";
}

ExponentPrediction predicted_exponent(double m, double k, double p, EquationClass cls) {
  ExponentPrediction out;
  auto need = [&](bool ok, const char* what, double value) {
    if (ok) return;
    std::ostringstream os;
    os << what << " (got " << value << ")";
    out.violations.push_back(os.str());
  };
  need(m > 3.0, "m > 3", m);
  const double data = m - 1.0;
  switch (cls) {
    case EquationClass::linear:
      need(k > 2.0, "k > 2", k);
      out.value = std::min(k, data);
      break;
    case EquationClass::nonlinear:
      need(p > 1.0 + std::sqrt(2.0), "p > 1 + sqrt(2)", p);
      out.value = std::min(p - 1.0, data);
      break;
    case EquationClass::full:
      need(k > 2.0, "k > 2", k);
      need(p > 1.0 + std::sqrt(2.0), "p > 1 + sqrt(2)", p);
      out.value = std::min({p - 1.0, k, data});
      break;
  }
  return out;
}

}  // namespace tailwave
