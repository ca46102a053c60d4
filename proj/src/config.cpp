#include "tailwave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "tailwave/csv.hpp"

namespace tailwave {

namespace {

using nlohmann::json;

void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(path.empty() ? key : path + "." + key, "unknown key");
    }
  }
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

void read(const json& obj, const std::string& path, const char* key, double& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) fail(join(path, key), "must be finite");
}

void read(const json& obj, const std::string& path, const char* key, int& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  out = v.get<int>();
}

void read(const json& obj, const std::string& path, const char* key, bool& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  out = v.get<bool>();
}

void read(const json& obj, const std::string& path, const char* key, std::string& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  out = v.get<std::string>();
}

ProfileConfig parse_profile(const json& j, const std::string& path) {
  ProfileConfig p;
  if (!j.is_object()) fail(path, "expected an object");
  read(j, path, "family", p.family);
  if (p.family == "zero") {
    only_keys(j, path, {"family"});
  } else if (p.family == "gaussian") {
    only_keys(j, path, {"family", "amplitude", "width", "center"});
  } else if (p.family == "compact_bump") {
    only_keys(j, path, {"family", "amplitude", "radius", "center"});
  } else if (p.family == "powerlaw") {
    only_keys(j, path, {"family", "amplitude", "power"});
  } else {
    fail(join(path, "family"), "unknown profile family '" + p.family + "'");
  }
  read(j, path, "amplitude", p.amplitude);
  read(j, path, "width", p.width);
  read(j, path, "center", p.center);
  read(j, path, "radius", p.radius);
  read(j, path, "power", p.power);
  if (!(p.width > 0.0)) fail(join(path, "width"), "must be > 0");
  if (!(p.radius > 0.0)) fail(join(path, "radius"), "must be > 0");
  if (p.family == "powerlaw" && !(p.power > 0.0)) fail(join(path, "power"), "must be > 0");
  return p;
}

json profile_json(const ProfileConfig& p) {
  json j = {{"family", p.family}};
  if (p.family == "gaussian") {
    j["amplitude"] = p.amplitude;
    j["width"] = p.width;
    j["center"] = p.center;
  } else if (p.family == "compact_bump") {
    j["amplitude"] = p.amplitude;
    j["radius"] = p.radius;
    j["center"] = p.center;
  } else if (p.family == "powerlaw") {
    j["amplitude"] = p.amplitude;
    j["power"] = p.power;
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  only_keys(j, "", {"equation", "data", "potential", "nonlinearity", "grid", "scheme", "fit", "reference", "output"});

  std::string eq = "linear";
  read(j, "", "equation", eq);
  if (eq == "linear") c.equation = EquationClass::linear;
  else if (eq == "nonlinear") c.equation = EquationClass::nonlinear;
  else if (eq == "full") c.equation = EquationClass::full;
  else fail("equation", "expected linear, nonlinear or full");

  if (j.contains("data")) {
    const json& d = j.at("data");
    only_keys(d, "data", {"f", "g", "amplitude"});
    if (d.contains("f")) c.f = parse_profile(d.at("f"), "data.f");
    if (d.contains("g")) c.g = parse_profile(d.at("g"), "data.g");
    read(d, "data", "amplitude", c.eps);
  }

  if (j.contains("potential")) {
    const json& p = j.at("potential");
    only_keys(p, "potential", {"k", "v0", "lambda", "lambda_tilde", "a"});
    c.has_potential = true;
    read(p, "potential", "k", c.k);
    read(p, "potential", "v0", c.v0);
    read(p, "potential", "lambda", c.lambda);
    read(p, "potential", "lambda_tilde", c.lambda_tilde);
    read(p, "potential", "a", c.a);
    if (!(c.k > 0.0)) fail("potential.k", "must be > 0");
    if (c.lambda < 0.0) fail("potential.lambda", "must be >= 0");
    if (c.a < 0) fail("potential.a", "must be >= 0");
  }

  if (j.contains("nonlinearity")) {
    const json& n = j.at("nonlinearity");
    only_keys(n, "nonlinearity", {"coeffs", "p", "coeff", "radius"});
    if (n.contains("coeffs") == n.contains("p")) fail("nonlinearity", "give exactly one of 'coeffs' or 'p'");
    if (n.contains("coeffs")) {
      const json& arr = n.at("coeffs");
      if (!arr.is_array()) fail("nonlinearity.coeffs", "expected an array of numbers");
      for (const auto& x : arr) {
        if (!x.is_number()) fail("nonlinearity.coeffs", "expected an array of numbers");
        c.coeffs.push_back(x.get<double>());
      }
      if (n.contains("coeff")) fail("nonlinearity.coeff", "only valid together with 'p'");
    } else {
      read(n, "nonlinearity", "p", c.power_p);
      read(n, "nonlinearity", "coeff", c.power_coeff);
      if (!(c.power_p > 1.0)) fail("nonlinearity.p", "must be > 1");
    }
    read(n, "nonlinearity", "radius", c.radius);
  }

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    only_keys(g, "grid", {"h", "t_max", "v_max"});
    read(g, "grid", "h", c.h);
    read(g, "grid", "t_max", c.t_max);
    read(g, "grid", "v_max", c.v_max);
    if (!(c.h > 0.0)) fail("grid.h", "must be > 0");
    if (!(c.t_max > 0.0)) fail("grid.t_max", "must be > 0");
  }

  if (j.contains("scheme")) {
    const json& s = j.at("scheme");
    only_keys(s, "scheme", {"method", "potential_mode", "N", "tol", "q"});
    read(s, "scheme", "method", c.method);
    if (c.method != "picard" && c.method != "perturb") fail("scheme.method", "expected picard or perturb");
    std::string mode = "perturbative";
    read(s, "scheme", "potential_mode", mode);
    if (mode == "perturbative") c.mode = PotentialMode::perturbative;
    else if (mode == "nonperturbative") c.mode = PotentialMode::nonperturbative;
    else fail("scheme.potential_mode", "expected perturbative or nonperturbative");
    read(s, "scheme", "N", c.N);
    read(s, "scheme", "tol", c.tol);
    read(s, "scheme", "q", c.q);
    if (c.N < 1) fail("scheme.N", "must be >= 1");
  }

  if (j.contains("fit")) {
    const json& f = j.at("fit");
    only_keys(f, "fit", {"probe_r", "t_min", "t_max", "certify_multiple"});
    read(f, "fit", "probe_r", c.probe_r);
    read(f, "fit", "t_min", c.fit_t_min);
    read(f, "fit", "t_max", c.fit_t_max);
    read(f, "fit", "certify_multiple", c.certify_multiple);
    if (c.probe_r < 0.0) fail("fit.probe_r", "must be >= 0");
  }

  read(j, "", "reference", c.reference);

  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"dir", "field_stride"});
    read(o, "output", "dir", c.output_dir);
    read(o, "output", "field_stride", c.field_stride);
  }

  if (c.equation != EquationClass::linear && c.coeffs.empty() && std::isnan(c.power_p)) {
    fail("nonlinearity", "required for the nonlinear and full equations");
  }
  if (c.equation == EquationClass::linear && (!c.coeffs.empty() || !std::isnan(c.power_p))) {
    fail("nonlinearity", "not allowed for the linear equation");
  }
  if (c.equation == EquationClass::nonlinear && c.has_potential) {
    fail("potential", "not allowed for the nonlinear equation (use 'full')");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": JSON syntax error";
    throw ConfigError(os.str());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["equation"] = to_string(c.equation);
  j["data"] = {{"f", profile_json(c.f)}, {"g", profile_json(c.g)}, {"amplitude", c.eps}};
  if (c.has_potential) {
    j["potential"] = {{"k", c.k}, {"v0", c.v0}, {"lambda", c.lambda}, {"a", c.a}};
    if (!std::isnan(c.lambda_tilde)) j["potential"]["lambda_tilde"] = c.lambda_tilde;
  }
  // unset optionals are left out so the dump parses back
  if (!c.coeffs.empty()) {
    j["nonlinearity"] = {{"coeffs", c.coeffs}};
  } else if (!std::isnan(c.power_p)) {
    j["nonlinearity"] = {{"p", c.power_p}, {"coeff", c.power_coeff}};
  }
  if (j.contains("nonlinearity") && std::isfinite(c.radius)) j["nonlinearity"]["radius"] = c.radius;
  j["grid"] = {{"h", c.h}, {"t_max", c.t_max}, {"v_max", c.v_max}};
  j["scheme"] = {{"method", c.method},
                 {"potential_mode", c.mode == PotentialMode::perturbative ? "perturbative" : "nonperturbative"},
                 {"N", c.N},
                 {"tol", c.tol},
                 {"q", c.q}};
  j["fit"] = {{"probe_r", c.probe_r}, {"t_min", c.fit_t_min}, {"t_max", c.fit_t_max},
              {"certify_multiple", c.certify_multiple}};
  j["reference"] = c.reference;
  // the output location does not change results and stays out of the hash
  j["output"] = {{"field_stride", c.field_stride}};
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) { return hex64(fnv1a(to_json(cfg).dump())); }

RadialProfile make_profile(const ProfileConfig& p) {
  if (p.family == "gaussian") return gaussian_profile(p.amplitude, p.width, p.center);
  if (p.family == "compact_bump") return compact_bump_profile(p.amplitude, p.radius, p.center);
  if (p.family == "powerlaw") return powerlaw_profile(p.amplitude, p.power);
  return zero_profile();
}

RadialProfile make_potential(const ExperimentConfig& c) {
  if (!c.has_potential || c.v0 == 0.0) return zero_profile();
  return powerlaw_potential(c.k, c.v0);
}

NonlinearitySpec make_nonlinearity(const ExperimentConfig& c) {
  if (!c.coeffs.empty()) return NonlinearitySpec::polynomial(c.coeffs, c.radius);
  if (std::isnan(c.power_p)) return NonlinearitySpec::none();
  if (c.power_p == std::floor(c.power_p) && c.power_p <= 64) {
    return NonlinearitySpec::monomial(static_cast<int>(c.power_p), c.power_coeff);
  }
  return NonlinearitySpec::power(c.power_p, c.power_coeff);
}

void set_axis(ExperimentConfig& c, const std::string& axis, double value) {
  if (axis == "lambda") {
    c.lambda = value;
    c.has_potential = true;
  } else if (axis == "eps") {
    c.eps = value;
  } else if (axis == "k") {
    c.k = value;
    c.has_potential = true;
  } else if (axis == "p") {
    if (!c.coeffs.empty()) {
      c.coeffs.clear();
    }
    c.power_p = value;
  } else if (axis == "h") {
    c.h = value;
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "' (expected lambda, eps, k, p or h)");
  }
}

}  // namespace tailwave
