#pragma once

#include <gmpxx.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pspectra {

/// Which base the absolute value uses: |x| = base^{-v(x)} with base = p or q = p^f.
enum class NormBase { P, Q };

struct params_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
bool is_prime(long n);
}

/// Residue field element of F_q = F_p[theta]/(modulus), coefficients in [0, p).
struct FqElem {
  std::vector<long> c;  // size f
};

/**
 * Parameters of an unramified extension K/Q_p of degree f, with a fixed
 * working precision (number of significant base-p digits).
 *
 * The modulus is a monic degree-f polynomial over Z/p, irreducible mod p;
 * K = Q_p(theta) with theta a root. Elements of O_K are represented by
 * coefficient vectors (c_0, ..., c_{f-1}) with c_j in Z/p^precision.
 */
class FieldParams {
 public:
  long p = 0;
  int f = 1;
  std::vector<long> modulus;  // low coefficients c_0..c_{f-1} of x^f + c_{f-1}x^{f-1} + ... + c_0
  NormBase norm_base = NormBase::P;
  int precision = 32;

  mpz_class p_mpz;
  mpz_class p_prec;          // p^precision
  double q = 0;              // p^f as double
  long q_long = 0;           // p^f, guarded against overflow
  double norm_base_value() const { return norm_base == NormBase::P ? double(p) : q; }

  /// theta^s reduced mod (modulus, p^precision), s in [0, 2f-1); row s holds f coefficients.
  const std::vector<mpz_class>& theta_power(int s) const { return theta_pow_[s]; }
  /// Tr_{K/Q_p}(theta^s) mod p^precision, s in [0, 2f-1).
  const mpz_class& trace_theta(int s) const { return trace_[s]; }

  mpz_class p_pow(long e) const;  // p^e for e >= 0

  // Residue field arithmetic (coefficients mod p).
  FqElem fq_zero() const { return FqElem{std::vector<long>(f, 0)}; }
  FqElem fq_one() const;
  bool fq_is_zero(const FqElem& a) const;
  FqElem fq_add(const FqElem& a, const FqElem& b) const;
  FqElem fq_sub(const FqElem& a, const FqElem& b) const;
  FqElem fq_mul(const FqElem& a, const FqElem& b) const;
  FqElem fq_pow(FqElem a, mpz_class e) const;
  FqElem fq_inv(const FqElem& a) const;
  /// Square root in F_q, or empty. Deterministic (Tonelli-Shanks for odd q,
  /// Frobenius for q even); of the two roots returns the one with smaller encoding.
  std::vector<FqElem> fq_sqrt(const FqElem& a) const;
  long fq_encode(const FqElem& a) const;  // sum a_j p^j in [0, q)
  FqElem fq_decode(long v) const;

  static std::shared_ptr<const FieldParams> make(long p, int f, int precision,
                                                 NormBase nb,
                                                 std::vector<long> modulus = {});
  /// Default norm base: P for f = 1, Q for f > 1.
  static std::shared_ptr<const FieldParams> make(long p, int f = 1, int precision = 32);

  bool same_field(const FieldParams& o) const {
    return p == o.p && f == o.f && modulus == o.modulus && precision == o.precision &&
           norm_base == o.norm_base;
  }

 private:
  std::vector<std::vector<mpz_class>> theta_pow_;
  std::vector<mpz_class> trace_;
  void build_tables();
  friend std::shared_ptr<const FieldParams> make_params_impl(long, int, int, NormBase,
                                                             std::vector<long>);
};

using ParamsPtr = std::shared_ptr<const FieldParams>;

/// First lexicographic monic polynomial of degree f irreducible mod p.
std::vector<long> find_irreducible_modulus(long p, int f);

}  // namespace pspectra
