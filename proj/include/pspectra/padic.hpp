#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pspectra/field_params.hpp"

namespace pspectra {

/// Exact power of the norm base, or zero. |x| = base^{exp}.
struct PNorm {
  bool zero = true;
  long exp = 0;

  static PNorm of_exp(long e) { return PNorm{false, e}; }
  double to_double(const FieldParams& P) const {
    if (zero) return 0.0;
    double b = P.norm_base_value();
    double r = 1.0;
    long e = exp;
    bool neg = e < 0;
    if (neg) e = -e;
    for (long i = 0; i < e; ++i) r *= b;
    return neg ? 1.0 / r : r;
  }
  friend bool operator==(const PNorm& a, const PNorm& b) {
    return a.zero == b.zero && (a.zero || a.exp == b.exp);
  }
  friend bool operator<(const PNorm& a, const PNorm& b) {
    if (a.zero) return !b.zero;
    if (b.zero) return false;
    return a.exp < b.exp;
  }
  friend bool operator<=(const PNorm& a, const PNorm& b) { return a < b || a == b; }
};

/**
 * Truncated element of the unramified extension K/Q_p.
 *
 * x = p^{val} * u with u a unit of O_K known modulo p^{prec}; u is stored as
 * coefficients (c_0, ..., c_{f-1}) in the theta basis, 0 <= c_j < p^{prec},
 * not all divisible by p. Exact zero is a tagged state. Values are immutable;
 * arithmetic propagates precision pessimistically, and a nonzero result whose
 * significant range would be empty degrades to exact zero (full cancellation
 * at working precision).
 */
class Padic {
 public:
  Padic() = default;

  static Padic zero(ParamsPtr P) {
    Padic x;
    x.P_ = std::move(P);
    x.zero_ = true;
    return x;
  }
  static Padic from_mpz(ParamsPtr P, mpz_class v);
  static Padic from_long(ParamsPtr P, long v) { return from_mpz(std::move(P), mpz_class(v)); }
  static Padic from_rational(ParamsPtr P, long num, long den);
  /// p^{val} * (unit given by theta-basis coefficients), with given significant digits.
  static Padic from_unit(ParamsPtr P, int val, std::vector<mpz_class> coeffs, int prec);
  /// theta itself (f > 1).
  static Padic theta(ParamsPtr P);

  const ParamsPtr& params() const { return P_; }
  bool is_zero() const { return zero_; }
  int valuation() const;  // throws on exact zero
  int precision() const { return zero_ ? P_->precision : prec_; }
  const std::vector<mpz_class>& unit_coeffs() const { return u_; }

  PNorm abs() const { return zero_ ? PNorm{} : PNorm::of_exp(-val_); }
  double abs_double() const { return abs().to_double(*P_); }

  /// Residue-field digit at position val+i (i in [0, precision)); encoded in [0, q).
  long digit(int i) const;
  FqElem leading_digit() const;

  Padic operator-() const;
  Padic operator+(const Padic& o) const;
  Padic operator-(const Padic& o) const;
  Padic operator*(const Padic& o) const;
  Padic operator/(const Padic& o) const;
  Padic inverse() const;
  /// Multiply by p^e (exact valuation shift).
  Padic shift(int e) const;

  /// v(a - b) >= min-end means indistinguishable at working precision.
  bool same_at_precision(const Padic& o) const;

  /// Trace to Q_p (result lives in the degree-1 subfield parameter set).
  Padic trace_to_qp(ParamsPtr qp_params) const;
  /// frac_p(Tr(x)) as an exact rational a / p^k, 0 <= a < p^k.
  std::pair<mpz_class, mpz_class> trace_frac() const;

  std::string to_string(int max_digits = 8) const;

  /// Total order used for canonical choices: zero first, then by valuation,
  /// then lexicographic digits.
  static int compare_canonical(const Padic& a, const Padic& b);

 private:
  ParamsPtr P_;
  bool zero_ = true;
  int val_ = 0;
  int prec_ = 0;
  std::vector<mpz_class> u_;

  void normalize(int known_end);  // known modulo p^{known_end}
  void check_params(const Padic& o) const;
  friend Padic add_impl(const Padic& a, const Padic& b, bool sub);
};

/// Canonical square root (lexicographically smaller digit sequence), or nullopt
/// if x is not a square in K. x must be nonzero.
std::optional<Padic> padic_sqrt(const Padic& x);

class PadicVector {
 public:
  PadicVector() = default;
  explicit PadicVector(std::vector<Padic> c) : c_(std::move(c)) {}
  static PadicVector zero(ParamsPtr P, int N);

  int dim() const { return int(c_.size()); }
  const Padic& operator[](int i) const { return c_[i]; }
  Padic& operator[](int i) { return c_[i]; }
  const std::vector<Padic>& components() const { return c_; }

  PNorm norm() const;  // max of component norms
  PadicVector operator+(const PadicVector& o) const;
  PadicVector operator-(const PadicVector& o) const;
  PadicVector shift(int e) const;

  std::string to_string() const;

 private:
  std::vector<Padic> c_;
};

}  // namespace pspectra
