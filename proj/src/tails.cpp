#include "tailwave/tails.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailwave/waveops.hpp"

namespace tailwave {

double DecayFit::model(double t) const { return coefficient * std::pow(t, -exponent); }

std::vector<double> sample_times(const NullGrid& grid, double probe_r, FitWindow window) {
  if (!(window.t_min > 0.0) || !(window.t_max > window.t_min)) {
    throw std::invalid_argument("fit window needs 0 < t_min < t_max");
  }
  const double h = grid.h();
  const double reach = std::min(grid.t_max(), grid.v_max() - probe_r);
  if (window.t_max > reach + 1e-9 * std::max(1.0, reach)) {
    std::ostringstream os;
    os << "fit window ends at t=" << window.t_max << " beyond the grid reach " << reach << " at r=" << probe_r;
    throw OutOfDomainError(os.str());
  }
  std::vector<double> ts;
  const auto j0 = static_cast<long long>(std::ceil((window.t_min + probe_r) / h - 1e-9));
  for (long long j = j0;; ++j) {
    const double t = static_cast<double>(j) * h - probe_r;
    if (t > window.t_max + 1e-9) break;
    ts.push_back(t);
  }
  return ts;
}

DecayFit fit_power_law(std::span<const double> t, std::span<const double> y, double probe_r, double zero_floor) {
  if (t.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  DecayFit fit;
  fit.probe_r = probe_r;
  fit.samples = static_cast<int>(t.size());
  if (t.size() < 2) {
    fit.flag = "too few samples";
    return fit;
  }
  fit.window = {t.front(), t.back()};
  int pos = 0, neg = 0;
  for (double v : y) {
    if (!(std::abs(v) > zero_floor)) fit.zero_signal = true;
    else if (v > 0.0) ++pos;
    else ++neg;
  }
  fit.sign_change = pos > 0 && neg > 0;
  if (fit.zero_signal) {
    fit.flag = "zero samples in window";
    return fit;
  }
  if (fit.sign_change) {
    fit.flag = "sign change in window";
    return fit;
  }
  const double n = static_cast<double>(t.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    sx += std::log(t[k]);
    sy += std::log(std::abs(y[k]));
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double dx = std::log(t[k]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(y[k])) - my);
  }
  fit.exponent = -sxy / sxx;
  const std::size_t mid = t.size() / 2;
  fit.coefficient = y[mid] * std::pow(t[mid], fit.exponent);
  double eta = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double m = fit.model(t[k]);
    eta = std::max(eta, std::abs(y[k] - m) / std::abs(m));
  }
  fit.eta = eta;
  return fit;
}

DecayFit fit_power_law(const SpacetimeField& u, double probe_r, FitWindow window) {
  const auto ts = sample_times(u.grid(), probe_r, window);
  std::vector<double> ys(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) ys[k] = u.at(ts[k], probe_r);
  DecayFit fit = fit_power_law(ts, ys, probe_r, 1e-12 * max_abs(u));
  fit.window = window;
  return fit;
}

FitWindow default_window(const NullGrid& grid, double probe_r) {
  const double reach = std::min(grid.t_max(), grid.v_max() - probe_r);
  return {0.25 * reach, 0.75 * reach};
}

double timelike_start(double probe_r, double m, double k, double p) {
  double s = 0.0;
  for (double x : {m, k, p}) {
    if (std::isfinite(x)) s = std::max(s, x);
  }
  return std::max(0.0, 2.0 * (s - 2.0) * probe_r);
}

DecayFit tail_coefficient_first_order(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                                      const GridPtr& grid, double probe_r, FitWindow window) {
  SpacetimeField v1(grid);
  if (!V.is_zero()) {
    const SpacetimeField v0 = i0_apply(f, g, grid);
    v1 = -1.0 * l0_apply(multiply_radial(v0, [&V](double r) { return V(r); }));
  }
  return fit_power_law(v1, probe_r, window);
}

DecayFit tail_coefficient_order_p(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                                  const RadialProfile* V, double lambda_tilde, int a, const GridPtr& grid,
                                  double probe_r, FitWindow window) {
  if (F.is_zero()) return fit_power_law(SpacetimeField(grid), probe_r, window);
  if (!F.supports_hierarchy()) throw std::invalid_argument("order-p tail needs an integer power p >= 3");
  SchemeOptions opt;
  opt.N = static_cast<int>(F.p);
  opt.q = 2.0;  // norms are not used here
  SchemeRun run;
  if (V != nullptr && !V->is_zero() && lambda_tilde != 0.0) {
    FullSeriesSpec spec;
    spec.lambda_tilde = lambda_tilde;
    spec.a = a;
    run = perturb_full(f, g, *V, F, grid, spec, opt);
  } else {
    run = perturb_nonlinear(f, g, F, grid, opt);
  }
  return fit_power_law(run.element(opt.N), probe_r, window);
}

double remainder_bound(const RemainderParams& P, int n, double t, double r) {
  if (n < 0) throw std::invalid_argument("remainder_bound: order must be >= 0");
  const double w = bracket(t + r) * std::pow(bracket(t - r), P.q - 1.0);
  switch (P.cls) {
    case EquationClass::linear: {
      const double d = P.C_pk * P.lambda;
      if (d >= 1.0) throw std::domain_error("remainder_bound: C_{p,k}·lambda >= 1");
      if (d == 0.0) return 0.0;
      return std::pow(d, n + 1) / (1.0 - d) * P.C_m * P.data / w;
    }
    case EquationClass::nonlinear:
    case EquationClass::full: {
      const double d = P.cls == EquationClass::full ? 2.0 * P.delta - P.delta * P.delta : P.delta;
      if (!(d < 1.0) || d < 0.0) throw std::domain_error("remainder_bound: contraction constant outside [0,1)");
      return std::pow(d, n) / (1.0 - d) * 3.0 * P.C_m * P.eps / w;
    }
  }
  return 0.0;
}

RemainderCheck check_remainder(const SpacetimeField& u_ref, const SpacetimeField& u_n, const RemainderParams& params,
                               int n, double min_retarded) {
  require_same_grid(u_ref, u_n, "check_remainder");
  const NullGrid& g = u_ref.grid();
  RemainderCheck out;
  for (int i = 0; i < g.n_rows(); ++i) {
    if (g.u(i) < min_retarded - 1e-12) continue;
    for (int j = g.row_begin(i); j < g.row_end(i); ++j) {
      const double t = g.t(i, j), r = g.r(i, j);
      const double err = std::abs(u_ref.physical(i, j) - u_n.physical(i, j));
      const double b = remainder_bound(params, n, t, r);
      ++out.nodes;
      const double ratio = b > 0.0 ? err / b : (err > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (ratio > out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_t = t;
        out.worst_r = r;
      }
      if (err > b) ++out.violations;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

Certification certify_asymptotics(const SchemeRun& run, const SpacetimeField& u_ref, const DecayFit& fit,
                                  double scale, double multiple) {
  Certification c;
  c.window = fit.window;
  c.multiple = multiple;
  c.eta = fit.eta;
  const double d = run.params.delta;
  if (std::isfinite(d) && d >= 1.0) {
    c.skipped = true;
    c.note = "skipped: hypothesis violated, contraction constant >= 1";
    return c;
  }
  if (!fit.ok()) {
    c.skipped = true;
    c.note = "skipped: fit failed (" + fit.flag + ")";
    return c;
  }
  const auto ts = sample_times(u_ref.grid(), fit.probe_r, fit.window);
  double worst = 0.0;
  for (double t : ts) {
    const double lead = scale * fit.model(t);
    worst = std::max(worst, std::abs(u_ref.at(t, fit.probe_r) - lead) / std::abs(lead));
  }
  c.max_rel_error = worst;
  const double allowed = multiple * fit.eta;
  c.margin = worst > 0.0 ? allowed / worst : std::numeric_limits<double>::infinity();
  c.certified = worst <= allowed;
  std::ostringstream os;
  os << "max rel error " << worst << " vs " << multiple << "*eta = " << allowed;
  c.note = os.str();
  return c;
}

}  // namespace tailwave
