#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tailwave/config.hpp"
#include "tailwave/schemes.hpp"
#include "tailwave/tails.hpp"
#include "tailwave/verify.hpp"

namespace tailwave {

/// Parameters implied by a config before anything is solved.
struct ResolvedParams {
  double m = 0.0, k = 0.0, p = 0.0;
  double q = 0.0;
  double m_eff = 0.0;  // weight of the data norms (finite even for compact data)
  double C_m = 0.0;
  double C_pq = std::numeric_limits<double>::quiet_NaN();  // C_{q,k}
  double delta = std::numeric_limits<double>::quiet_NaN();
  double delta_prime = std::numeric_limits<double>::quiet_NaN();
  double lambda_tilde = std::numeric_limits<double>::quiet_NaN();
  int a = 0;
  std::vector<std::string> violations;
  std::size_t nodes = 0;
};

ResolvedParams resolve(const ExperimentConfig& cfg);
void print_resolved(std::ostream& os, const ExperimentConfig& cfg, const ResolvedParams& rp);

struct RunOutcome {
  int exit_code = 0;
  SchemeRun run;
  DecayFit fit;
  Certification cert;
  std::vector<VerifyReport> reports;
  std::optional<SpacetimeField> solution;  // u_ref when computed, else the scheme's solution
  double calibrated_C = std::numeric_limits<double>::quiet_NaN();
};

/// Solves, fits, verifies and writes run.csv, fit.csv, verify.csv and field
/// dumps into cfg.output_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg, std::ostream& log);

int cmd_run(const ExperimentConfig& cfg, bool dry_run, std::ostream& log);

/// Repeats the run along one axis into <output_dir>/<axis>_<i>/ and writes
/// <output_dir>/sweep.csv.
int cmd_sweep(const ExperimentConfig& cfg, const std::string& axis, const std::vector<double>& values,
              std::ostream& log);

/// Built-in suites: lemmas, theorems, majorant, equivalence, all.
std::vector<VerifyReport> run_suite(const std::string& suite, std::ostream& log);
int cmd_verify(const std::string& suite, const std::string& out_dir, std::ostream& log);

void write_verify_csv(const std::string& path, const std::vector<VerifyReport>& reports, const std::string& hash);

/// Exit status of a report list: 0 unless a non-advisory check failed.
int exit_status(const std::vector<VerifyReport>& reports);

}  // namespace tailwave
