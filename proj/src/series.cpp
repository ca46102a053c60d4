#include "tailwave/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "tailwave/parallel.hpp"

namespace tailwave {

NonlinearitySpec NonlinearitySpec::none() {
  NonlinearitySpec F;
  F.p = std::numeric_limits<double>::infinity();
  return F;
}

NonlinearitySpec NonlinearitySpec::monomial(int p, double c) {
  if (p < 2) throw std::invalid_argument("nonlinearity power must be >= 2");
  std::vector<double> b(static_cast<std::size_t>(p) + 1, 0.0);
  b[static_cast<std::size_t>(p)] = c;
  return polynomial(std::move(b));
}

NonlinearitySpec NonlinearitySpec::polynomial(std::vector<double> coeffs, double radius) {
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) return none();
  const auto first = std::find_if(coeffs.begin(), coeffs.end(), [](double x) { return x != 0.0; });
  const int p = static_cast<int>(first - coeffs.begin());
  if (p < 2) throw std::invalid_argument("nonlinearity must vanish to second order at u = 0");
  if (!(radius > 0.0)) throw std::invalid_argument("nonlinearity radius must be > 0");
  NonlinearitySpec F;
  F.b = std::move(coeffs);
  F.p = p;
  F.radius = radius;
  for (std::size_t n = 0; n < F.b.size(); ++n) {
    F.F1 += std::abs(F.b[n]);
    F.F2 += static_cast<double>(n) * std::abs(F.b[n]);
  }
  return F;
}

NonlinearitySpec NonlinearitySpec::power(double p, double c) {
  if (!(p > 1.0)) throw std::invalid_argument("power nonlinearity needs p > 1");
  NonlinearitySpec F;
  F.p = p;
  F.power_coeff = c;
  F.F1 = std::abs(c);
  F.F2 = p * std::abs(c);
  return F;
}

double NonlinearitySpec::operator()(double u) const {
  if (!b.empty()) {
    double acc = 0.0;
    for (std::size_t n = b.size(); n-- > 0;) acc = acc * u + b[n];
    return acc;
  }
  if (power_coeff == 0.0) return 0.0;
  return power_coeff * u * std::pow(std::abs(u), p - 1.0);
}

bool NonlinearitySpec::is_zero() const { return b.empty() && power_coeff == 0.0; }

bool NonlinearitySpec::supports_hierarchy() const {
  return !b.empty() && p >= 3.0 && std::floor(p) == p;
}

NonlinearitySpec majorant_of(const NonlinearitySpec& F) {
  NonlinearitySpec out = F;
  for (double& x : out.b) x = std::abs(x);
  out.power_coeff = std::abs(F.power_coeff);
  return out;
}

namespace {

void require_taylor(const NonlinearitySpec& F, const char* where) {
  if (!F.is_zero() && !F.has_taylor()) {
    throw std::invalid_argument(std::string(where) +
                                ": non-integer power nonlinearity has no series expansion");
  }
}

// Coefficient of ε^{M} in Σ_d b_d U^d, U = Σ_{k≥1} c[k] εᵏ, all series cut at ε^M.
// `pw` and `next` are scratch buffers of length M + 1.
double power_series_coefficient(const std::vector<double>& b, const double* c, int M,
                                std::vector<double>& pw, std::vector<double>& next) {
  const int deg = std::min(static_cast<int>(b.size()) - 1, M);
  if (deg < 1) return 0.0;
  std::fill(pw.begin(), pw.begin() + M + 1, 0.0);
  for (int k = 1; k <= M; ++k) pw[k] = c[k];
  double out = b.size() > 1 ? b[1] * pw[M] : 0.0;
  // pw holds U^d; its lowest order is d.
  for (int d = 2; d <= deg; ++d) {
    std::fill(next.begin(), next.begin() + M + 1, 0.0);
    for (int i = d - 1; i <= M - 1; ++i) {
      const double x = pw[i];
      if (x == 0.0) continue;
      for (int k = 1; i + k <= M; ++k) {
        if (c[k] != 0.0) next[i + k] += x * c[k];
      }
    }
    std::swap(pw, next);
    if (b[d] != 0.0) out += b[d] * pw[M];
  }
  return out;
}

}  // namespace

double compose_coefficient(const NonlinearitySpec& F, std::span<const double> v, int n) {
  require_taylor(F, "compose_F");
  if (n < 1) throw std::invalid_argument("compose_F: order must be >= 1");
  if (static_cast<int>(v.size()) < n) throw std::invalid_argument("compose_F: too few coefficients");
  if (F.is_zero()) return 0.0;
  const int M = n + 1;
  std::vector<double> c(static_cast<std::size_t>(M) + 1, 0.0);
  for (int k = 1; k <= n; ++k) c[k] = v[static_cast<std::size_t>(k - 1)];
  std::vector<double> pw(c.size()), next(c.size());
  return power_series_coefficient(F.b, c.data(), M, pw, next);
}

ScalarSeries compose_F(const NonlinearitySpec& F, const ScalarSeries& v) {
  ScalarSeries out;
  const int N = v.order();
  out.coeffs.assign(static_cast<std::size_t>(N) + 1, 0.0);
  for (int n = 1; n <= N; ++n) out[n + 1] = compose_coefficient(F, v.coeffs, n);
  return out;
}

SpacetimeField compose_order(const NonlinearitySpec& F, std::span<const SpacetimeField> v, int n) {
  require_taylor(F, "compose_F");
  if (n < 1 || static_cast<int>(v.size()) < n) {
    throw std::invalid_argument("compose_F: order out of range");
  }
  const GridPtr& gp = v[0].grid_ptr();
  for (int k = 1; k < n; ++k) require_same_grid(v[0], v[static_cast<std::size_t>(k)], "compose_F");
  if (F.is_zero()) return SpacetimeField(gp);

  const int M = n + 1;
  // Only the lowest power p and nonzero v_k can contribute; skip the work
  // when every monomial of F_n vanishes structurally.
  std::vector<int> live;
  for (int k = 1; k <= n; ++k) {
    if (!v[static_cast<std::size_t>(k - 1)].is_zero()) live.push_back(k);
  }
  if (live.empty() || static_cast<double>(live.front()) * F.p > M) return SpacetimeField(gp);

  const NullGrid& g = *gp;
  std::vector<double> out(g.node_count(), 0.0);
  parallel_for(static_cast<std::size_t>(g.n_rows()), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> c(static_cast<std::size_t>(M) + 1, 0.0), pw(c.size()), next(c.size());
    for (std::size_t ii = lo; ii < hi; ++ii) {
      const int i = static_cast<int>(ii);
      std::size_t idx = g.row_offset(i);
      for (int j = g.row_begin(i); j < g.row_end(i); ++j, ++idx) {
        const double r = g.r(i, j);
        if (r == 0.0) continue;
        for (int k : live) c[k] = v[static_cast<std::size_t>(k - 1)].psi_at(idx) / r;
        out[idx] = r * power_series_coefficient(F.b, c.data(), M, pw, next);
      }
    }
  });
  return SpacetimeField(gp, std::move(out));
}

FieldSeries compose_F(const NonlinearitySpec& F, const FieldSeries& v) {
  if (v.order() < 1) return {};
  FieldSeries out;
  out.coeffs.emplace_back(v[1].grid_ptr());
  for (int n = 1; n <= v.order(); ++n) out.coeffs.push_back(compose_order(F, v.coeffs, n));
  return out;
}

std::vector<AnkTerm> enumerate_ank(const NonlinearitySpec& F, int n, std::size_t budget) {
  require_taylor(F, "enumerate_ank");
  if (n < 1) throw std::invalid_argument("enumerate_ank: order must be >= 1");
  std::vector<AnkTerm> out;
  if (F.is_zero()) return out;
  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  std::size_t visited = 0;

  // Distribute the weight n+1 over parts m = top, top-1, ..., 1.
  std::function<void(int, int)> rec = [&](int m, int remaining) {
    if (++visited > budget) {
      throw EnumerationBudgetError("enumerate_ank: order " + std::to_string(n) +
                                   " exceeds the enumeration budget");
    }
    if (m == 0) {
      if (remaining != 0) return;
      int total = 0;
      for (int x : alpha) total += x;
      if (total < F.p) return;
      const double b = F.coeff(total);
      if (b == 0.0) return;
      double multinomial = 1.0;
      int running = 0;
      for (int x : alpha) {
        for (int q = 1; q <= x; ++q) multinomial = multinomial * (running + q) / q;
        running += x;
      }
      out.push_back({b * multinomial, alpha});
      return;
    }
    for (int count = remaining / m; count >= 0; --count) {
      alpha[static_cast<std::size_t>(m - 1)] = count;
      rec(m - 1, remaining - count * m);
    }
    alpha[static_cast<std::size_t>(m - 1)] = 0;
  };
  rec(n, n + 1);
  return out;
}

ScalarSeries solve_majorant(const MajorantProblem& pb, const NonlinearitySpec& F) {
  if (!(pb.delta >= 0.0) || pb.delta >= 1.0) {
    throw std::domain_error("majorant: delta must lie in [0, 1) (potential strength above the contraction bound)");
  }
  if (pb.C < 0.0 || pb.D < 0.0) throw std::invalid_argument("majorant: C and D must be >= 0");
  if (pb.order < 1) throw std::invalid_argument("majorant: order must be >= 1");
  if (pb.variant == MajorantVariant::scaled_potential && (pb.a < 1 || pb.delta_tilde < 0.0)) {
    throw std::invalid_argument("majorant: scale exponent a must be a positive integer");
  }
  const NonlinearitySpec Ft = majorant_of(F);
  require_taylor(Ft, "solve_majorant");
  double C = pb.C;
  double D = pb.D;
  if (pb.variant == MajorantVariant::inverted_potential) {
    C /= 1.0 - pb.delta;
    D /= 1.0 - pb.delta;
  }
  ScalarSeries w;
  w.coeffs.assign(static_cast<std::size_t>(pb.order), 0.0);
  w[1] = D;
  for (int n = 1; n < pb.order; ++n) {
    double next = C * compose_coefficient(Ft, w.coeffs, n);
    if (pb.variant == MajorantVariant::scaled_potential && n + 1 - pb.a >= 1) {
      next += pb.delta_tilde * w[n + 1 - pb.a];
    }
    w[n + 1] = next;
  }
  return w;
}

RadiusEstimate radius_estimate(const ScalarSeries& w) {
  std::vector<int> nz;
  for (int n = 1; n <= w.order(); ++n) {
    if (w[n] != 0.0) nz.push_back(n);
  }
  RadiusEstimate est;
  if (std::none_of(nz.begin(), nz.end(), [](int n) { return n > 1; })) {
    est.radius = std::numeric_limits<double>::infinity();
    est.polynomial = true;
    est.first_order = est.last_order = nz.empty() ? 0 : 1;
    return est;
  }
  if (nz.size() < 6) throw std::invalid_argument("radius_estimate: need at least 6 nonzero coefficients");
  // Tail window: nonzero orders n >= 0.6 N, widened to at least three points.
  const int start = static_cast<int>(std::ceil(0.6 * w.order()));
  auto first = std::find_if(nz.begin(), nz.end(), [&](int n) { return n >= start; });
  while (nz.end() - first < 3) --first;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(nz.end() - first);
  for (auto it = first; it != nz.end(); ++it) {
    const double x = *it;
    const double y = std::log(std::abs(w[*it]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  est.rho = std::exp(slope);
  est.radius = 1.0 / est.rho;
  est.first_order = *first;
  est.last_order = nz.back();
  return est;
}

double evaluate(const ScalarSeries& w, double eps) {
  double acc = 0.0;
  for (int n = w.order(); n >= 1; --n) acc = (acc + w[n]) * eps;
  return acc;
}

}  // namespace tailwave
