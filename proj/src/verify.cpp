#include "tailwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tailwave/norms.hpp"
#include "tailwave/waveops.hpp"

namespace tailwave {

namespace {

using nlohmann::json;

std::string compact(const json& j) { return j.dump(); }

// JSON cannot hold inf/nan; write them as strings.
json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double weight_power(const RadialProfile& f, double m, double r_max, double dr, bool derivative) {
  const auto mesh = radial_mesh(r_max, dr);
  if (!derivative) return norm_space(f, m, mesh);
  std::vector<double> vals(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) vals[k] = f.slope(mesh[k]);
  return norm_space(mesh, vals, m);
}

}  // namespace

VerifyReport make_report(std::string id, std::string params_json, double lhs, double rhs, double slack,
                         std::string notes) {
  VerifyReport r;
  r.check_id = std::move(id);
  r.params_json = std::move(params_json);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  r.margin = lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity();
  r.pass = std::isfinite(lhs) && lhs <= rhs * (1.0 + slack);
  r.notes = std::move(notes);
  return r;
}

double DataNorms::eps() const { return std::max({f0, f1, g0}); }

DataNorms data_norms(const RadialProfile& f, const RadialProfile& g, double m, double r_max, double dr) {
  DataNorms d;
  if (!f.is_zero()) {
    d.f0 = weight_power(f, m - 1.0, r_max, dr, false);
    d.f1 = weight_power(f, m, r_max, dr, true);
  }
  if (!g.is_zero()) d.g0 = weight_power(g, m, r_max, dr, false);
  return d;
}

double effective_m(double m, double q) {
  if (std::isfinite(m)) return m;
  return std::max(4.0, std::isfinite(q) ? q + 1.0 : 4.0);
}

VerifyReport verify_lemma_init_data(const RadialProfile& f, const RadialProfile& g, double m, const GridPtr& grid) {
  if (!(m > 3.0)) throw std::domain_error("init-data lemma requires m > 3");
  const DataNorms d = data_norms(f, g, m, grid->v_max(), 0.5 * grid->h());
  const SpacetimeField u = i0_apply(f, g, grid);
  const double lhs = norm_spacetime(u, 1.0, m - 1.0);
  const double rhs = c_m(m) * d.sum();
  json p = {{"f", f.name}, {"g", g.name}, {"m", m}, {"h", grid->h()}, {"t_max", grid->t_max()},
            {"f0", d.f0}, {"f1", d.f1}, {"g0", d.g0}};
  return make_report("lemma_init_data", compact(p), lhs, rhs);
}

SpacetimeField extremal_source(const GridPtr& grid, double q, double p) {
  return SpacetimeField::from_physical(grid, [q, p](double t, double r) {
    return std::pow(bracket(r), -q) / bracket(t + r) * std::pow(bracket(t - r), 1.0 - p);
  });
}

SpacetimeField extremal_field(const GridPtr& grid, double q) {
  return SpacetimeField::from_physical(
      grid, [q](double t, double r) { return 1.0 / bracket(t + r) * std::pow(bracket(t - r), 1.0 - q); });
}

VerifyReport verify_lemma_source(const SpacetimeField& F, double q, double p) {
  if (!(q > 2.0) || !(p > 1.0) || p > q) throw std::domain_error("source lemma requires q > 2 and 1 < p <= q");
  const double F0 = norm_spacetime(multiply_radial(F, [q](double r) { return std::pow(bracket(r), q); }), 1.0, p);
  const double lhs = norm_spacetime(l0_apply(F), 1.0, p);
  const double rhs = c_pq(p, q) * F0;
  json j = {{"p", p}, {"q", q}, {"h", F.grid().h()}, {"t_max", F.grid().t_max()}, {"F0", F0}};
  return make_report("lemma_source", compact(j), lhs, rhs);
}

std::vector<SpacetimeField> power_lemma_family(const GridPtr& grid, double q,
                                               std::span<const SpacetimeField> extra) {
  std::vector<SpacetimeField> fam;
  fam.push_back(extremal_field(grid, q));
  fam.push_back(i0_apply(gaussian_profile(1.0, 1.0), zero_profile(), grid));
  fam.push_back(i0_apply(zero_profile(), compact_bump_profile(1.0, 2.0), grid));
  for (const auto& e : extra) fam.push_back(e);
  return fam;
}

PowerLemmaResult verify_lemma_power_p(std::span<const SpacetimeField> family, double p, double q) {
  if (!(q > 1.0) || q > p - 1.0) throw std::domain_error("power lemma requires 1 < q <= p − 1");
  PowerLemmaResult out;
  double lhs_at = 0.0, rhs_at = 0.0;
  for (const auto& u : family) {
    const double nu = norm_spacetime(u, 1.0, q);
    if (nu == 0.0) {
      out.ratios.push_back(0.0);
      continue;
    }
    const SpacetimeField up = map_physical(u, [p](double x) { return std::pow(std::abs(x), p); });
    const double lhs = norm_spacetime(l0_apply(up), 1.0, q);
    const double rhs = std::pow(nu, p);
    out.ratios.push_back(lhs / rhs);
    if (lhs / rhs >= out.C_emp) {
      out.C_emp = lhs / rhs;
      lhs_at = lhs;
      rhs_at = rhs;
    }
  }
  json j = {{"p", p}, {"q", q}, {"family", family.size()}};
  if (!family.empty()) j["h"] = family.front().grid().h();
  // The lemma's C is unspecified: the check records C_emp, with rhs = C_emp‖u‖^p.
  out.report = make_report("lemma_power_p", compact(j), lhs_at, out.C_emp * rhs_at, kDefaultSlack,
                           "empirical-constant C_emp");
  if (!(p > 1.0 + std::sqrt(2.0))) {
    out.report.advisory = true;
    out.report.notes += "; p <= 1+sqrt(2) outside hypothesis";
  }
  return out;
}

DecayLemmaResult verify_lemma_decay(double A, double p, double q, const GridPtr& grid, double probe_r) {
  if (!(p > 2.0) || !(q > 1.0)) throw std::domain_error("decay lemma requires p > 2 and q > 1");
  DecayLemmaResult out;
  json j = {{"A", A}, {"p", p}, {"q", q}, {"h", grid->h()}, {"t_max", grid->t_max()}, {"probe_r", probe_r}};
  if (A == 0.0) {
    out.report = make_report("lemma_decay", compact(j), 0.0, 0.2, 0.0, "zero source");
    return out;
  }
  const SpacetimeField F = SpacetimeField::from_physical(grid, [A, p, q](double t, double r) {
    return A * std::pow(bracket(t + r), -p) * std::pow(bracket(t - r), -q);
  });
  const SpacetimeField w = l0_apply(F);
  out.C_emp = norm_spacetime(w, 1.0, p - 1.0) / std::abs(A);
  out.fit = fit_power_law(w, probe_r, default_window(*grid, probe_r));
  j["C_emp"] = out.C_emp;
  j["exponent"] = num(out.fit.exponent);
  const double dev = out.fit.ok() ? std::abs(out.fit.exponent - (p - 1.0)) : std::numeric_limits<double>::infinity();
  out.report = make_report("lemma_decay", compact(j), dev, 0.2, 0.0,
                           out.fit.ok() ? "empirical-constant C_emp" : "fit failed: " + out.fit.flag);
  return out;
}

std::vector<VerifyReport> verify_theorem_bounds(const SchemeRun& run, const TheoremContext& ctx) {
  std::vector<VerifyReport> out;
  if (run.series || run.norms.empty()) return out;
  const auto& P = run.params;
  double worst = 0.0;
  for (double n : run.norms) worst = std::max(worst, n);
  bool advisory = false;
  for (const auto& n : run.notes) advisory = advisory || n.rfind("hypothesis", 0) == 0;

  json j = {{"scheme", run.scheme_id}, {"lambda", P.lambda}, {"q", P.q}, {"m", num(P.m)}, {"k", num(P.k)},
            {"p", num(P.p)}, {"C_m", ctx.C_m}, {"data", ctx.data_sum}, {"eps", ctx.eps}};
  std::string id;
  double rhs = 0.0;
  std::string notes;
  if (run.scheme_id == "picard_linear") {
    const double d = P.delta;
    id = "theorem_linear_norm";
    j["delta"] = d;
    rhs = d < 1.0 ? ctx.C_m * ctx.data_sum / (1.0 - d) : std::numeric_limits<double>::infinity();
    if (!(d < 1.0)) advisory = true;
  } else if (run.scheme_id == "picard_nonlinear") {
    id = "theorem_nonlinear_norm";
    rhs = 6.0 * ctx.C_m * ctx.eps;
  } else {
    const double d = std::isfinite(P.delta) ? P.delta : 0.0;
    id = "theorem_full_norm";
    j["delta"] = d;
    if (d < 1.0) {
      const double M = 3.0 / (1.0 - d) * (1.0 + ctx.slack);
      j["M"] = M;
      rhs = M * ctx.C_m * ctx.eps;
    } else {
      rhs = std::numeric_limits<double>::infinity();
      advisory = true;
    }
  }
  VerifyReport r = make_report(id, compact(j), worst, rhs, ctx.slack, notes);
  r.advisory = advisory;
  if (advisory) r.notes = "advisory: outside theorem hypotheses";
  out.push_back(std::move(r));
  return out;
}

std::vector<VerifyReport> verify_majorant_domination(const SchemeRun& run, const ScalarSeries& w,
                                                     bool empirical_constant) {
  if (!run.series) throw std::invalid_argument("majorant domination needs a perturbation series run");
  if (run.first_index != 1 || w.order() < run.last_index) {
    throw std::invalid_argument("majorant domination: order count mismatch");
  }
  const std::string tag = empirical_constant ? "empirical-constant" : "";
  std::vector<VerifyReport> out;
  for (int n = 1; n <= run.last_index; ++n) {
    json j = {{"n", n}, {"q", run.params.q}, {"scheme", run.scheme_id}};
    out.push_back(make_report("majorant_order", compact(j), run.norm_of(n), w[n], 0.0, tag));
  }
  RadiusEstimate est;
  try {
    est = radius_estimate(w);
  } catch (const std::invalid_argument&) {
    return out;  // too few nonzero majorant orders for an envelope
  }
  double M = 0.0;
  if (est.rho > 0.0) {
    for (int n = 1; n <= w.order(); ++n) M = std::max(M, w[n] / std::pow(est.rho, n));
    for (int n = 1; n <= run.last_index; ++n) {
      json j = {{"n", n}, {"M", M}, {"rho", est.rho}};
      out.push_back(make_report("majorant_envelope", compact(j), run.norm_of(n), M * std::pow(est.rho, n), 0.0, tag));
    }
  }
  return out;
}

std::vector<InitDataCase> default_init_data_sweep() {
  const RadialProfile z = zero_profile();
  return {
      {"gauss_f", gaussian_profile(1.0, 1.0), z, 4.0},
      {"gauss_g", z, gaussian_profile(1.0, 1.0), 4.0},
      {"bump_f", compact_bump_profile(1.0, 2.0), z, 4.0},
      {"bump_g", z, compact_bump_profile(1.0, 2.0), 5.0},
      {"power_f3", powerlaw_profile(1.0, 3.0), z, 4.0},
      {"power_g4", z, powerlaw_profile(1.0, 4.0), 4.0},
      {"power_f4_g5", powerlaw_profile(1.0, 4.0), powerlaw_profile(0.5, 5.0), 5.0},
      {"shell_fg", gaussian_profile(1.0, 1.0, 5.0), gaussian_profile(0.5, 1.0, 5.0), 4.0},
      {"power_f25_g35", powerlaw_profile(1.0, 2.5), powerlaw_profile(1.0, 3.5), 3.5},
      {"bump_fg_wide", compact_bump_profile(1.0, 3.0), compact_bump_profile(-0.7, 3.0), 6.0},
  };
}

std::vector<std::pair<double, double>> default_source_sweep() {
  return {{1.5, 2.5}, {2.0, 2.5}, {2.5, 2.5}, {1.5, 3.0}, {2.0, 3.0},
          {3.0, 3.0}, {2.0, 4.0}, {3.0, 4.0}, {4.0, 4.0}, {3.0, 5.0}};
}

VerifyReport stability_report(std::string id, double coarse, double fine, double tol) {
  const double rel = fine != 0.0 ? std::abs(coarse - fine) / std::abs(fine) : std::abs(coarse - fine);
  json j = {{"coarse", num(coarse)}, {"fine", num(fine)}};
  return make_report(std::move(id), compact(j), rel, tol, 0.0, "refinement h -> h/2");
}

VerifyReport verify_linear_equivalence(const SchemeRun& picard, const SchemeRun& series, double lambda, double tol) {
  const int N = std::min(picard.last_index, series.last_index);
  double worst = 0.0;
  SpacetimeField partial;
  for (int n = 0; n <= N; ++n) {
    const SpacetimeField& v = series.element(n);
    partial = n == 0 ? v : axpy(partial, std::pow(lambda, n), v);
    const SpacetimeField& u = picard.element(n);
    const double scale = max_abs(u);
    const double diff = max_abs_diff(partial, u);
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  json j = {{"lambda", lambda}, {"N", N}, {"tol", tol}};
  return make_report("linear_equivalence", compact(j), worst, tol, 0.0);
}

}  // namespace tailwave
