#pragma once

#include "pspectra/padic.hpp"

namespace pspectra {

/// Point of P^1(K): a scalar or the tagged point at infinity.
struct ProjPoint {
  bool inf = false;
  Padic z;

  static ProjPoint infinity() { return ProjPoint{true, Padic()}; }
  static ProjPoint of(Padic v) { return ProjPoint{false, std::move(v)}; }
  bool same_at_precision(const ProjPoint& o) const {
    if (inf != o.inf) return false;
    return inf || z.same_at_precision(o.z);
  }
  std::string to_string() const { return inf ? "inf" : z.to_string(); }
};

/// z -> (az + b)/(cz + d), entries modulo a common scalar; ad - bc != 0.
class MoebiusMap {
 public:
  Padic a, b, c, d;

  MoebiusMap() = default;
  MoebiusMap(Padic a_, Padic b_, Padic c_, Padic d_);

  static MoebiusMap identity(ParamsPtr P);
  /// Hyperbolic map with attracting fixed point za, repelling zr, multiplier t
  /// (local derivative t at za). Either fixed point may be infinity.
  static MoebiusMap from_fixed_points(const ProjPoint& za, const ProjPoint& zr, const Padic& t);

  const ParamsPtr& params() const { return a.params() ? a.params() : d.params(); }
  Padic det() const { return a * d - b * c; }
  MoebiusMap compose(const MoebiusMap& o) const;  // this after o
  MoebiusMap inverse() const;                     // adjugate (projective)

  ProjPoint apply(const ProjPoint& p) const;
  Padic derivative_at(const ProjPoint& fixed) const;  // local derivative at a fixed point

  std::string to_string() const;
};

struct FixedPointResult {
  enum class Kind { TwoPoints, Parabolic, NoRoot } kind = Kind::NoRoot;
  ProjPoint z1, z2;  // for TwoPoints; ordered canonically (finite points sorted, inf last)
};

/// Fixed points via z^2 + ((d-a)/c) z - b/c = 0 for c != 0; the c = 0 branch
/// yields infinity plus b/(d-a). Parabolic maps are reported distinctly.
FixedPointResult moebius_fixed_points(const MoebiusMap& m);

struct MultiplierResult {
  enum class Kind { Hyperbolic, NotHyperbolic } kind = Kind::NotHyperbolic;
  Padic t;  // |t| < 1 when hyperbolic
};

/// Eigenvalue ratio with |t| < 1; NotHyperbolic when the eigenvalues have equal
/// absolute value (including the conjugate-pair case of a non-square discriminant).
MultiplierResult moebius_multiplier(const MoebiusMap& m);

}  // namespace pspectra
