#include "tailwave/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailwave/norms.hpp"

namespace tailwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Norm exponent of a run: the configured value or the predicted decay,
// falling back to 2 when nothing limits the decay (e.g. V ≡ 0, compact data).
double resolve_q(const SchemeOptions& opt, double predicted, SchemeRun& run) {
  if (opt.q > 0.0) {
    if (!(opt.q > 1.0)) throw std::invalid_argument("norm exponent q must be > 1");
    return opt.q;
  }
  if (std::isfinite(predicted) && predicted > 1.0) return predicted;
  run.notes.push_back("no finite decay limit; norms use q = 2");
  return 2.0;
}

void note_hypotheses(SchemeRun& run, const ExponentPrediction& pred) {
  for (const auto& v : pred.violations) run.notes.push_back("hypothesis violated: " + v);
}

void note_delta(SchemeRun& run, double delta, const char* name) {
  if (std::isfinite(delta) && delta >= 1.0) {
    std::ostringstream os;
    os << name << " = " << delta << " >= 1: outside the contraction regime";
    run.notes.push_back(os.str());
  }
}

double potential_delta(double lambda, double q, double k) {
  if (lambda == 0.0 || !std::isfinite(k)) return 0.0;
  return lambda * c_pq(q, k);
}

class Recorder {
 public:
  Recorder(SchemeRun& run, bool keep_all) : run_(run), keep_all_(keep_all) {}

  void push(SpacetimeField x, double norm, double diff) {
    const int n = run_.last_index + 1;
    run_.last_index = n;
    run_.norms.push_back(norm);
    const double prev = run_.diffs.empty() ? kNaN : run_.diffs.back();
    run_.diffs.push_back(diff);
    // below the round-off floor a ratio only measures noise
    run_.ratios.push_back(prev > 1e-8 * norm ? diff / prev : kNaN);
    run_.elements.push_back(std::move(x));
    run_.indices.push_back(n);
    if (!keep_all_ && run_.elements.size() > 2) {
      run_.elements.erase(run_.elements.begin());
      run_.indices.erase(run_.indices.begin());
    }
  }

 private:
  SchemeRun& run_;
  bool keep_all_;
};

// Shared driver for x_{n+1} = step(x_n).
template <typename Step>
void iterate(SchemeRun& run, const SchemeOptions& opt, SpacetimeField x0, int steps, Step&& step) {
  const double q = run.params.q;
  Recorder rec(run, opt.keep_all);
  SpacetimeField prev = x0;
  rec.push(std::move(x0), norm_spacetime(prev, 1.0, q), kNaN);
  for (int n = 0; n < steps; ++n) {
    SpacetimeField next = step(prev);
    const double diff = norm_spacetime(next - prev, 1.0, q);
    const double nrm = norm_spacetime(next, 1.0, q);
    rec.push(next, nrm, diff);
    prev = std::move(next);
    if (opt.tol > 0.0 && diff < opt.tol) {
      run.early_stopped = true;
      break;
    }
  }
}

void check_N(const SchemeOptions& opt) {
  if (opt.N < 1) throw std::invalid_argument("scheme: N must be >= 1");
  opt.evo.validate();
}

void require_hierarchy(const NonlinearitySpec& F) {
  if (!F.is_zero() && !F.supports_hierarchy()) {
    throw std::invalid_argument(
        "perturbation hierarchy needs an integer power p >= 3 with Taylor coefficients");
  }
}

std::function<double(double)> as_fn(const RadialProfile& V) {
  return [&V](double r) { return V(r); };
}

std::function<double(double)> as_fn(const NonlinearitySpec& F) {
  return [&F](double u) { return F(u); };
}

}  // namespace

bool SchemeRun::has(int n) const { return std::find(indices.begin(), indices.end(), n) != indices.end(); }

const SpacetimeField& SchemeRun::element(int n) const {
  const auto it = std::find(indices.begin(), indices.end(), n);
  if (it == indices.end()) {
    throw std::out_of_range("scheme run: element " + std::to_string(n) + " not stored");
  }
  return elements[static_cast<std::size_t>(it - indices.begin())];
}

double SchemeRun::norm_of(int n) const {
  if (n < first_index || n > last_index) throw std::out_of_range("scheme run: index out of range");
  return norms[static_cast<std::size_t>(n - first_index)];
}

double SchemeRun::ratio_of(int n) const {
  if (n < first_index || n > last_index) throw std::out_of_range("scheme run: index out of range");
  return ratios[static_cast<std::size_t>(n - first_index)];
}

double SchemeRun::max_ratio(int from) const {
  double best = kNaN;
  for (int n = std::max(from, first_index); n <= last_index; ++n) {
    const double r = ratio_of(n);
    if (std::isfinite(r) && !(r <= best)) best = r;
  }
  return best;
}

double data_decay(const RadialProfile& f, const RadialProfile& g) {
  double m = std::numeric_limits<double>::infinity();
  if (!f.compact) m = std::min(m, f.decay_power + 1.0);
  if (!g.compact) m = std::min(m, g.decay_power);
  return m;
}

SchemeRun picard_linear(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                        double lambda, const GridPtr& grid, const SchemeOptions& opt) {
  check_N(opt);
  SchemeRun run;
  run.scheme_id = "picard_linear";
  run.first_index = 0;
  auto& P = run.params;
  P.lambda = lambda;
  P.m = data_decay(f, g);
  P.k = V.is_zero() ? std::numeric_limits<double>::infinity() : V.decay_power;
  const auto pred = predicted_exponent(P.m, P.k, 3.0, EquationClass::linear);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);
  P.delta = potential_delta(lambda, P.q, P.k);
  note_delta(run, P.delta, "delta");

  const SpacetimeField u0 = i0_apply(f, g, grid);
  const auto Vf = as_fn(V);
  run.first_index = 0;
  run.last_index = -1;
  // u_{-1} = 0 contributes ‖u_0 − u_{-1}‖ = ‖I₀‖ as the first difference.
  Recorder rec(run, opt.keep_all);
  SpacetimeField prev = u0;
  const double n0 = norm_spacetime(u0, 1.0, P.q);
  rec.push(u0, n0, n0);
  for (int n = 1; n <= opt.N; ++n) {
    SpacetimeField next = (lambda == 0.0 || V.is_zero())
                              ? u0
                              : axpy(u0, -lambda, l0_apply(multiply_radial(prev, Vf)));
    const double diff = norm_spacetime(next - prev, 1.0, P.q);
    rec.push(next, norm_spacetime(next, 1.0, P.q), diff);
    prev = std::move(next);
    if (opt.tol > 0.0 && diff < opt.tol) {
      run.early_stopped = true;
      break;
    }
  }
  return run;
}

SchemeRun perturb_linear(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                         const GridPtr& grid, const SchemeOptions& opt) {
  check_N(opt);
  SchemeRun run;
  run.scheme_id = "perturb_linear";
  run.series = true;
  run.first_index = 0;
  auto& P = run.params;
  P.m = data_decay(f, g);
  P.k = V.is_zero() ? std::numeric_limits<double>::infinity() : V.decay_power;
  const auto pred = predicted_exponent(P.m, P.k, 3.0, EquationClass::linear);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);

  const auto Vf = as_fn(V);
  Recorder rec(run, true);
  SpacetimeField v = i0_apply(f, g, grid);
  double nv = norm_spacetime(v, 1.0, P.q);
  rec.push(v, nv, nv);
  for (int n = 1; n <= opt.N; ++n) {
    v = -1.0 * l0_apply(multiply_radial(v, Vf));
    nv = norm_spacetime(v, 1.0, P.q);
    rec.push(v, nv, nv);
  }
  return run;
}

SchemeRun picard_nonlinear(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                           const GridPtr& grid, const SchemeOptions& opt) {
  check_N(opt);
  SchemeRun run;
  run.scheme_id = "picard_nonlinear";
  auto& P = run.params;
  P.m = data_decay(f, g);
  P.p = F.is_zero() ? std::numeric_limits<double>::infinity() : F.p;
  const auto pred = predicted_exponent(P.m, 3.0, P.p, EquationClass::nonlinear);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);

  const SpacetimeField u0 = i0_apply(f, g, grid);
  const auto Ff = as_fn(F);
  iterate(run, opt, SpacetimeField(grid), opt.N, [&](const SpacetimeField& u) {
    if (F.is_zero() || u.is_zero()) return u0;
    return u0 + l0_apply(map_physical(u, Ff));
  });
  return run;
}

SchemeRun perturb_nonlinear(const RadialProfile& f, const RadialProfile& g, const NonlinearitySpec& F,
                            const GridPtr& grid, const SchemeOptions& opt) {
  check_N(opt);
  require_hierarchy(F);
  SchemeRun run;
  run.scheme_id = "perturb_nonlinear";
  run.series = true;
  run.first_index = 1;
  run.last_index = 0;
  auto& P = run.params;
  P.m = data_decay(f, g);
  P.p = F.is_zero() ? std::numeric_limits<double>::infinity() : F.p;
  const auto pred = predicted_exponent(P.m, 3.0, P.p, EquationClass::nonlinear);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);

  Recorder rec(run, true);
  SpacetimeField v1 = i0_apply(f, g, grid);
  const double n1 = norm_spacetime(v1, 1.0, P.q);
  rec.push(std::move(v1), n1, n1);
  for (int n = 1; n < opt.N; ++n) {
    SpacetimeField next = l0_apply(compose_order(F, run.elements, n));
    const double nn = norm_spacetime(next, 1.0, P.q);
    rec.push(std::move(next), nn, nn);
  }
  return run;
}

SchemeRun picard_full(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                      double lambda, const NonlinearitySpec& F, const GridPtr& grid, PotentialMode mode,
                      const SchemeOptions& opt) {
  check_N(opt);
  SchemeRun run;
  run.scheme_id = mode == PotentialMode::perturbative ? "picard_full_perturbative"
                                                      : "picard_full_nonperturbative";
  auto& P = run.params;
  P.lambda = lambda;
  P.m = data_decay(f, g);
  P.k = V.is_zero() ? std::numeric_limits<double>::infinity() : V.decay_power;
  P.p = F.is_zero() ? std::numeric_limits<double>::infinity() : F.p;
  const auto pred = predicted_exponent(P.m, P.k, P.p, EquationClass::full);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);
  P.delta = potential_delta(lambda, P.q, P.k);
  P.delta_prime = 2.0 * P.delta - P.delta * P.delta;
  note_delta(run, P.delta, "delta");

  EvolutionParams evo = opt.evo;
  evo.lambda = lambda;
  const auto Vf = as_fn(V);
  const auto Ff = as_fn(F);
  const bool pot = lambda != 0.0 && !V.is_zero();
  if (mode == PotentialMode::perturbative) {
    const SpacetimeField u0 = i0_apply(f, g, grid);
    iterate(run, opt, SpacetimeField(grid), opt.N, [&](const SpacetimeField& u) {
      if (u.is_zero()) return u0;
      SpacetimeField src = F.is_zero() ? SpacetimeField(grid) : map_physical(u, Ff);
      if (pot) src = axpy(src, -lambda, multiply_radial(u, Vf));
      return u0 + l0_apply(src);
    });
  } else {
    const SpacetimeField uv = iv_apply(f, g, V, evo, grid);
    iterate(run, opt, SpacetimeField(grid), opt.N, [&](const SpacetimeField& u) {
      if (u.is_zero() || F.is_zero()) return uv;
      return uv + lv_apply(map_physical(u, Ff), V, evo);
    });
  }
  return run;
}

SchemeRun perturb_full(const RadialProfile& f, const RadialProfile& g, const RadialProfile& V,
                       const NonlinearitySpec& F, const GridPtr& grid, const FullSeriesSpec& spec,
                       const SchemeOptions& opt) {
  check_N(opt);
  require_hierarchy(F);
  SchemeRun run;
  run.series = true;
  run.first_index = 1;
  run.last_index = 0;
  auto& P = run.params;
  P.m = data_decay(f, g);
  P.k = V.is_zero() ? std::numeric_limits<double>::infinity() : V.decay_power;
  P.p = F.is_zero() ? std::numeric_limits<double>::infinity() : F.p;
  const auto pred = predicted_exponent(P.m, P.k, P.p, EquationClass::full);
  note_hypotheses(run, pred);
  P.q = resolve_q(opt, pred.value, run);
  const auto Vf = as_fn(V);
  Recorder rec(run, true);

  if (spec.mode == PotentialMode::nonperturbative) {
    run.scheme_id = "perturb_full_nonperturbative";
    P.lambda = spec.lambda;
    P.delta = potential_delta(spec.lambda, P.q, P.k);
    note_delta(run, P.delta, "delta");
    EvolutionParams evo = opt.evo;
    evo.lambda = spec.lambda;
    SpacetimeField v1 = iv_apply(f, g, V, evo, grid);
    const double n1 = norm_spacetime(v1, 1.0, P.q);
    rec.push(std::move(v1), n1, n1);
    for (int n = 1; n < opt.N; ++n) {
      SpacetimeField next = lv_apply(compose_order(F, run.elements, n), V, evo);
      const double nn = norm_spacetime(next, 1.0, P.q);
      rec.push(std::move(next), nn, nn);
    }
    return run;
  }

  run.scheme_id = "perturb_full_perturbative";
  int a = spec.a;
  if (a == 0) {
    if (!std::isfinite(P.p)) throw std::invalid_argument("perturb_full: a = p − 1 needs a nonlinearity");
    a = static_cast<int>(P.p) - 1;
  }
  if (a < 1) throw std::invalid_argument("perturb_full: scale exponent a must be a positive integer");
  P.a = a;
  P.lambda_tilde = spec.lambda_tilde;
  P.delta = potential_delta(spec.lambda_tilde, P.q, P.k);
  SpacetimeField v1 = i0_apply(f, g, grid);
  const double n1 = norm_spacetime(v1, 1.0, P.q);
  rec.push(std::move(v1), n1, n1);
  for (int n = 1; n < opt.N; ++n) {
    SpacetimeField src = F.is_zero() ? SpacetimeField(grid) : compose_order(F, run.elements, n);
    const int lag = n + 1 - a;
    if (lag >= 1 && spec.lambda_tilde != 0.0 && !V.is_zero()) {
      src = axpy(src, -spec.lambda_tilde, multiply_radial(run.element(lag), Vf));
    }
    SpacetimeField next = l0_apply(src);
    const double nn = norm_spacetime(next, 1.0, P.q);
    rec.push(std::move(next), nn, nn);
  }
  return run;
}

SpacetimeField reconstruct(const SchemeRun& run, double eps, int n) {
  if (!run.series) throw std::invalid_argument("reconstruct: run is not a perturbation series");
  if (n < run.first_index || n > run.last_index) {
    throw std::out_of_range("reconstruct: order " + std::to_string(n) + " not available");
  }
  SpacetimeField acc(run.elements.front().grid_ptr());
  for (int m = run.first_index; m <= n; ++m) acc = axpy(acc, std::pow(eps, m), run.element(m));
  return acc;
}

}  // namespace tailwave
