#pragma once

#include <string>

#include "pspectra/field_params.hpp"

namespace pspectra {

struct Tolerances {
  double fourier = 1e-12;
  double kernel = 1e-8;
  double mass = 1e-10;
  double semigroup = 1e-8;
  double eigen = 1e-10;
  double cauchy = 1e-6;
  double lattice = 1e-9;
};

/// Run configuration: single JSON document; CLI flags override the file and
/// PSPECTRA_* environment variables override both.
struct RunConfig {
  long prime = 5;
  int degree = 1;
  int precision = 32;
  std::string norm_base = "auto";  // auto | P | Q
  double alpha = 1.0;
  double lambda = 1.0;
  int nu_max = 24;
  int rho = 4;
  Tolerances tol;
  unsigned long long seed = 12345;
  std::string out_dir = ".";

  void validate() const;
  ParamsPtr make_params() const;
  NormBase resolved_norm_base() const;

  static RunConfig from_json_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  void apply_env_overrides();
  std::string to_json() const;
};

}  // namespace pspectra
