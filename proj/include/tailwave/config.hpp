#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailwave/norms.hpp"
#include "tailwave/profiles.hpp"
#include "tailwave/schemes.hpp"
#include "tailwave/series.hpp"

namespace tailwave {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// zero | gaussian(amplitude, width, center) | compact_bump(amplitude, radius, center)
/// | powerlaw(amplitude, power): amplitude·⟨r⟩^{−power}
struct ProfileConfig {
  std::string family = "zero";
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double radius = 1.0;
  double power = 3.0;
};

struct ExperimentConfig {
  EquationClass equation = EquationClass::linear;

  ProfileConfig f, g;
  double eps = 1.0;  // data amplitude, multiplies f and g

  bool has_potential = false;
  double k = 3.0;
  double v0 = 1.0;
  double lambda = 0.0;
  double lambda_tilde = std::numeric_limits<double>::quiet_NaN();  // NaN: λ/εᵃ
  int a = 0;                                                       // 0: p − 1

  // nonlinearity: Taylor coefficients b_n, or a power c·u|u|^{p−1}
  std::vector<double> coeffs;
  double power_p = std::numeric_limits<double>::quiet_NaN();
  double power_coeff = 1.0;
  double radius = std::numeric_limits<double>::infinity();

  double h = 0.05;
  double t_max = 40.0;
  double v_max = 0.0;

  std::string method = "picard";  // picard | perturb
  PotentialMode mode = PotentialMode::perturbative;
  int N = 5;
  double tol = 0.0;
  double q = 0.0;

  double probe_r = 1.0;
  double fit_t_min = 0.0;  // 0: default window
  double fit_t_max = 0.0;
  double certify_multiple = 3.0;

  bool reference = true;
  std::string output_dir = "out";
  int field_stride = 0;  // 0: automatic, < 0: no field dumps
};

/// Strict parse: unknown keys, wrong types and bad values throw ConfigError
/// naming the key path.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Reads a JSON file; syntax errors report line and column.
ExperimentConfig load_config(const std::string& path);

/// Fully resolved config as JSON (every field, canonical key order).
nlohmann::json to_json(const ExperimentConfig& cfg);

/// FNV-1a of the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

RadialProfile make_profile(const ProfileConfig& p);
RadialProfile make_potential(const ExperimentConfig& cfg);
NonlinearitySpec make_nonlinearity(const ExperimentConfig& cfg);

/// Sweep axes: lambda, eps, k, p, h.
void set_axis(ExperimentConfig& cfg, const std::string& axis, double value);

}  // namespace tailwave
