#include "pspectra/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pspectra {

void RunConfig::validate() const {
  if (prime < 2) throw params_error("prime must be >= 2");
  if (precision < 8) throw params_error("precision must be >= 8");
  if (degree < 1) throw params_error("degree must be >= 1");
  if (alpha <= 0) throw params_error("alpha must be positive");
  double nb = norm_base == "P" ? double(prime)
                               : std::pow(double(prime), double(degree));
  if (norm_base == "auto") nb = degree == 1 ? double(prime) : std::pow(double(prime), degree);
  if (lambda > std::pow(nb, alpha) + 1e-12)
    throw params_error("lambda must satisfy lambda <= norm_base^alpha");
  if (nu_max < 1 || rho < 1) throw params_error("nu_max and rho must be >= 1");
}

NormBase RunConfig::resolved_norm_base() const {
  if (norm_base == "P") return NormBase::P;
  if (norm_base == "Q") return NormBase::Q;
  if (norm_base == "auto") return degree == 1 ? NormBase::P : NormBase::Q;
  throw params_error("norm_base must be one of auto|P|Q");
}

ParamsPtr RunConfig::make_params() const {
  validate();
  return FieldParams::make(prime, degree, precision, resolved_norm_base());
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  RunConfig c;
  c.prime = j.value("prime", c.prime);
  c.degree = j.value("degree", c.degree);
  c.precision = j.value("precision", c.precision);
  c.norm_base = j.value("norm_base", c.norm_base);
  c.alpha = j.value("alpha", c.alpha);
  c.lambda = j.value("lambda", c.lambda);
  c.nu_max = j.value("nu_max", c.nu_max);
  c.rho = j.value("rho", c.rho);
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out", c.out_dir);
  if (j.contains("tolerance")) {
    const auto& t = j["tolerance"];
    c.tol.fourier = t.value("fourier", c.tol.fourier);
    c.tol.kernel = t.value("kernel", c.tol.kernel);
    c.tol.mass = t.value("mass", c.tol.mass);
    c.tol.semigroup = t.value("semigroup", c.tol.semigroup);
    c.tol.eigen = t.value("eigen", c.tol.eigen);
    c.tol.cauchy = t.value("cauchy", c.tol.cauchy);
    c.tol.lattice = t.value("lattice", c.tol.lattice);
  }
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw params_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void RunConfig::apply_env_overrides() {
  auto get = [](const char* name) -> const char* { return std::getenv(name); };
  if (auto* v = get("PSPECTRA_PRIME")) prime = std::stol(v);
  if (auto* v = get("PSPECTRA_DEGREE")) degree = std::stoi(v);
  if (auto* v = get("PSPECTRA_PRECISION")) precision = std::stoi(v);
  if (auto* v = get("PSPECTRA_NORM_BASE")) norm_base = v;
  if (auto* v = get("PSPECTRA_ALPHA")) alpha = std::stod(v);
  if (auto* v = get("PSPECTRA_LAMBDA")) lambda = std::stod(v);
  if (auto* v = get("PSPECTRA_NU_MAX")) nu_max = std::stoi(v);
  if (auto* v = get("PSPECTRA_RHO")) rho = std::stoi(v);
  if (auto* v = get("PSPECTRA_SEED")) seed = std::stoull(v);
  if (auto* v = get("PSPECTRA_OUT")) out_dir = v;
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["prime"] = prime;
  j["degree"] = degree;
  j["precision"] = precision;
  j["norm_base"] = norm_base;
  j["alpha"] = alpha;
  j["lambda"] = lambda;
  j["nu_max"] = nu_max;
  j["rho"] = rho;
  j["tolerance"] = {{"fourier", tol.fourier},   {"kernel", tol.kernel},
                    {"mass", tol.mass},         {"semigroup", tol.semigroup},
                    {"eigen", tol.eigen},       {"cauchy", tol.cauchy},
                    {"lattice", tol.lattice}};
  j["seed"] = seed;
  j["out"] = out_dir;
  return j.dump(2);
}

}  // namespace pspectra
