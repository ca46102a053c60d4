#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailwave/field.hpp"
#include "tailwave/profiles.hpp"
#include "tailwave/schemes.hpp"
#include "tailwave/series.hpp"
#include "tailwave/tails.hpp"

namespace tailwave {

inline constexpr double kDefaultSlack = 0.05;

/// One inequality lhs <= rhs checked on a grid.  Grid sups are lower bounds
/// of the true sups, so a pass is necessary, not sufficient.
struct VerifyReport {
  std::string check_id;
  std::string params_json;  // hypothesis parameters, compact JSON
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs / lhs (inf when lhs = 0)
  double slack = kDefaultSlack;
  bool pass = false;    // lhs <= rhs·(1 + slack)
  bool advisory = false;  // out-of-hypothesis: reported, never build-breaking
  std::string notes;
};

VerifyReport make_report(std::string id, std::string params_json, double lhs, double rhs,
                         double slack = kDefaultSlack, std::string notes = {});

/// f₀ = ‖f‖_{m−1}, f₁ = ‖f′‖_m, g₀ = ‖g‖_m sampled on [0, r_max] with step dr.
struct DataNorms {
  double f0 = 0.0, f1 = 0.0, g0 = 0.0;
  double sum() const { return f0 + f1 + g0; }
  double eps() const;  // max(f₀, f₁, g₀)
};
DataNorms data_norms(const RadialProfile& f, const RadialProfile& g, double m, double r_max, double dr);

/// Weight exponent used for the data norms: m itself, or for compact data
/// max(4, q + 1) so that C_m and the norms stay finite.
double effective_m(double m, double q);

/// ‖I₀(f,g)‖_(1,m−1) <= C_m (g₀ + f₁ + f₀).  m <= 3 throws.
VerifyReport verify_lemma_init_data(const RadialProfile& f, const RadialProfile& g, double m, const GridPtr& grid);

/// ‖L₀F‖_(1,p) <= C_{p,q} ‖⟨r⟩^q F‖_(1,p).  Requires q > 2, 1 < p <= q.
VerifyReport verify_lemma_source(const SpacetimeField& F, double q, double p);

/// ⟨r⟩^{−q} ⟨t+r⟩^{−1} ⟨t−r⟩^{−(p−1)}, the extremal source of the lemma.
SpacetimeField extremal_source(const GridPtr& grid, double q, double p);

/// ⟨t+r⟩^{−1} ⟨t−r⟩^{−(q−1)}, unit (1,q) norm.
SpacetimeField extremal_field(const GridPtr& grid, double q);

struct PowerLemmaResult {
  VerifyReport report;
  double C_emp = 0.0;
  std::vector<double> ratios;  // per family member
};

/// C_emp = max over the family of ‖L₀(|u|^p)‖_(1,q) / ‖u‖_(1,q)^p.
/// Requires 1 < q <= p − 1; p <= 1 + √2 is reported as advisory.
PowerLemmaResult verify_lemma_power_p(std::span<const SpacetimeField> family, double p, double q);

/// Calibration family on a grid: the extremal field, I₀ of a Gaussian and of
/// a compact bump, and the given extra fields.
std::vector<SpacetimeField> power_lemma_family(const GridPtr& grid, double q,
                                               std::span<const SpacetimeField> extra = {});

struct DecayLemmaResult {
  VerifyReport report;  // |fitted − (p−1)| <= 0.2
  DecayFit fit;
  double C_emp = 0.0;   // ‖L₀F‖_(1,p−1) / A
};

/// F = A ⟨t+r⟩^{−p} ⟨t−r⟩^{−q}; checks the fixed-r decay t^{−(p−1)} of L₀F.
DecayLemmaResult verify_lemma_decay(double A, double p, double q, const GridPtr& grid, double probe_r = 1.0);

struct TheoremContext {
  double C_m = 5.0;
  double data_sum = 0.0;  // f₀ + f₁ + g₀
  double eps = 0.0;       // max(f₀, f₁, g₀)
  double slack = kDefaultSlack;
};

/// Theorem-level norm bounds on every stored iterate of a Picard run.
std::vector<VerifyReport> verify_theorem_bounds(const SchemeRun& run, const TheoremContext& ctx);

/// ‖v_n‖_(1,q) <= w_n per order, plus the envelope w_n <= M ρⁿ.
std::vector<VerifyReport> verify_majorant_domination(const SchemeRun& run, const ScalarSeries& w,
                                                     bool empirical_constant = true);

struct InitDataCase {
  std::string name;
  RadialProfile f, g;
  double m;
};

/// The shipped 10-profile sweep for the init-data lemma.
std::vector<InitDataCase> default_init_data_sweep();

/// The shipped (p, q) pairs for the source lemma, all with q > 2 and 1 < p <= q.
std::vector<std::pair<double, double>> default_source_sweep();

/// |a − b| / b <= tol as a report (refinement stability of empirical constants).
VerifyReport stability_report(std::string id, double coarse, double fine, double tol = 0.1);

/// Linear partial sums Σ λᵏ v_k against the Picard iterates u_n, n <= N.
VerifyReport verify_linear_equivalence(const SchemeRun& picard, const SchemeRun& series, double lambda,
                                       double tol = 1e-10);

}  // namespace tailwave
