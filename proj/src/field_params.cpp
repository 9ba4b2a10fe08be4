#include "pspectra/field_params.hpp"

#include <algorithm>

namespace pspectra {

namespace detail {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Polynomial helpers over F_p, dense low-to-high coefficient vectors.
using Poly = std::vector<long>;

static Poly poly_mod(Poly a, const Poly& m, long p) {
  // m is monic of degree dm (coefficient vector of length dm, implicit leading 1).
  int dm = int(m.size());
  while (int(a.size()) > dm) {
    long lead = a.back() % p;
    a.pop_back();
    if (lead == 0) continue;
    int off = int(a.size()) - dm;
    for (int i = 0; i < dm; ++i) a[off + i] = ((a[off + i] - lead * m[i]) % p + p * p) % p;
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

static Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, long p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

static Poly poly_powmod(Poly base, mpz_class e, const Poly& m, long p) {
  Poly r = {1};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

static Poly poly_gcd(Poly a, Poly b, long p) {
  auto inv_mod_p = [p](long x) {
    long r = 1, b2 = ((x % p) + p) % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b2 % p;
      b2 = b2 * b2 % p;
      e >>= 1;
    }
    return r;
  };
  while (!b.empty()) {
    // a mod b with b made monic
    long li = inv_mod_p(b.back());
    Poly bm = b;
    for (auto& c : bm) c = c * li % p;
    bm.pop_back();  // monic form for poly_mod
    Poly r = poly_mod(a, bm, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

static bool irreducible_mod_p(const Poly& m, long p) {
  // x^{p^f} == x mod m, and gcd(x^{p^{f/l}} - x, m) trivial for prime l | f.
  int f = int(m.size());
  mpz_class pf;
  mpz_ui_pow_ui(pf.get_mpz_t(), (unsigned long)p, (unsigned long)f);
  Poly x = (f == 1) ? Poly{} : Poly{0, 1};
  if (f == 1) return true;
  Poly xq = poly_powmod({0, 1}, pf, m, p);
  Poly diff = xq;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = ((diff[1] - 1) % p + p) % p;
  while (!diff.empty() && diff.back() == 0) diff.pop_back();
  if (!diff.empty()) return false;
  for (int l = 2; l <= f; ++l) {
    if (f % l != 0 || !is_prime(l)) continue;
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), (unsigned long)p, (unsigned long)(f / l));
    Poly xe = poly_powmod({0, 1}, pe, m, p);
    Poly d2 = xe;
    d2.resize(std::max<size_t>(d2.size(), 2), 0);
    d2[1] = ((d2[1] - 1) % p + p) % p;
    while (!d2.empty() && d2.back() == 0) d2.pop_back();
    Poly g = poly_gcd(m /*degree f, monic-implicit won't fit helper*/, d2, p);
    // poly_gcd expects full coefficient vectors; build full m first.
    Poly mfull = m;
    mfull.push_back(1);
    g = poly_gcd(mfull, d2, p);
    if (int(g.size()) > 1) return false;
  }
  return true;
}

}  // namespace detail

std::vector<long> find_irreducible_modulus(long p, int f) {
  if (f == 1) return {0};  // x + 0: theta = 0 unused for f = 1
  std::vector<long> m(f, 0);
  // lexicographic scan over (c_{f-1}, ..., c_0)
  long total = 1;
  for (int i = 0; i < f; ++i) {
    total *= p;
    if (total > 100000000L) throw params_error("modulus search space too large");
  }
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < f; ++i) {
      m[i] = c % p;
      c /= p;
    }
    if (detail::irreducible_mod_p(m, p)) return m;
  }
  throw params_error("no irreducible modulus found");
}

mpz_class FieldParams::p_pow(long e) const {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)p, (unsigned long)e);
  return r;
}

FqElem FieldParams::fq_one() const {
  FqElem e{std::vector<long>(f, 0)};
  e.c[0] = 1;
  return e;
}

bool FieldParams::fq_is_zero(const FqElem& a) const {
  for (long v : a.c)
    if (v % p != 0) return false;
  return true;
}

FqElem FieldParams::fq_add(const FqElem& a, const FqElem& b) const {
  FqElem r{std::vector<long>(f)};
  for (int i = 0; i < f; ++i) r.c[i] = (a.c[i] + b.c[i]) % p;
  return r;
}

FqElem FieldParams::fq_sub(const FqElem& a, const FqElem& b) const {
  FqElem r{std::vector<long>(f)};
  for (int i = 0; i < f; ++i) r.c[i] = ((a.c[i] - b.c[i]) % p + p) % p;
  return r;
}

FqElem FieldParams::fq_mul(const FqElem& a, const FqElem& b) const {
  std::vector<long> prod(2 * f - 1, 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + a.c[i] * b.c[j]) % p;
  // reduce theta^{f+k} via modulus
  for (int s = 2 * f - 2; s >= f; --s) {
    long lead = prod[s] % p;
    if (lead == 0) continue;
    prod[s] = 0;
    for (int i = 0; i < f; ++i)
      prod[s - f + i] = ((prod[s - f + i] - lead * modulus[i]) % p + p * p) % p;
  }
  FqElem r{std::vector<long>(f)};
  for (int i = 0; i < f; ++i) r.c[i] = ((prod[i] % p) + p) % p;
  return r;
}

FqElem FieldParams::fq_pow(FqElem a, mpz_class e) const {
  FqElem r = fq_one();
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = fq_mul(r, a);
    a = fq_mul(a, a);
    e >>= 1;
  }
  return r;
}

FqElem FieldParams::fq_inv(const FqElem& a) const {
  if (fq_is_zero(a)) throw params_error("inverse of zero residue");
  return fq_pow(a, mpz_class(q_long) - 2);
}

long FieldParams::fq_encode(const FqElem& a) const {
  long v = 0, pw = 1;
  for (int i = 0; i < f; ++i) {
    v += a.c[i] * pw;
    pw *= p;
  }
  return v;
}

FqElem FieldParams::fq_decode(long v) const {
  FqElem e{std::vector<long>(f)};
  for (int i = 0; i < f; ++i) {
    e.c[i] = v % p;
    v /= p;
  }
  return e;
}

std::vector<FqElem> FieldParams::fq_sqrt(const FqElem& a) const {
  if (fq_is_zero(a)) return {fq_zero()};
  if (p == 2) {
    // Frobenius inverse: x -> x^{q/2} is the unique square root.
    mpz_class e = mpz_class(q_long) / 2;
    FqElem r = fq_pow(a, e);
    return {r};
  }
  mpz_class qm1 = mpz_class(q_long) - 1;
  FqElem leg = fq_pow(a, qm1 / 2);
  if (fq_encode(leg) != 1) return {};  // non-residue
  // Tonelli-Shanks in F_q.
  mpz_class Q = qm1;
  unsigned long S = 0;
  while (mpz_even_p(Q.get_mpz_t())) {
    Q >>= 1;
    ++S;
  }
  // deterministic non-residue scan
  FqElem z;
  for (long enc = 2;; ++enc) {
    z = fq_decode(enc);
    if (fq_is_zero(z)) continue;
    if (fq_encode(fq_pow(z, qm1 / 2)) != 1) break;
  }
  FqElem M_c = fq_pow(z, Q);
  FqElem t = fq_pow(a, Q);
  FqElem R = fq_pow(a, (Q + 1) / 2);
  unsigned long M = S;
  while (fq_encode(t) != 1) {
    unsigned long i = 0;
    FqElem tt = t;
    while (fq_encode(tt) != 1) {
      tt = fq_mul(tt, tt);
      ++i;
      if (i == M) throw params_error("tonelli-shanks failure");
    }
    FqElem b = M_c;
    for (unsigned long k = 0; k + i + 1 < M; ++k) b = fq_mul(b, b);
    M = i;
    M_c = fq_mul(b, b);
    t = fq_mul(t, M_c);
    R = fq_mul(R, b);
  }
  FqElem nR = fq_sub(fq_zero(), R);
  if (fq_encode(nR) < fq_encode(R)) std::swap(R, nR);
  return {R, nR};
}

void FieldParams::build_tables() {
  p_mpz = p;
  mpz_ui_pow_ui(p_prec.get_mpz_t(), (unsigned long)p, (unsigned long)precision);
  q = 1;
  q_long = 1;
  for (int i = 0; i < f; ++i) {
    q *= double(p);
    if (q_long > (1L << 40)) throw params_error("q = p^f too large");
    q_long *= p;
  }
  // theta^s mod (modulus, p^precision)
  theta_pow_.assign(2 * f - 1, std::vector<mpz_class>(f, 0));
  theta_pow_[0][0] = 1;
  for (int s = 1; s < 2 * f - 1; ++s) {
    // multiply previous by theta: shift, then reduce the theta^f term
    std::vector<mpz_class> cur(f + 1, 0);
    for (int i = 0; i < f; ++i) cur[i + 1] = theta_pow_[s - 1][i];
    mpz_class lead = cur[f];
    for (int i = 0; i < f; ++i) {
      theta_pow_[s][i] = cur[i] - lead * modulus[i];
      mpz_mod(theta_pow_[s][i].get_mpz_t(), theta_pow_[s][i].get_mpz_t(), p_prec.get_mpz_t());
    }
  }
  // Tr(theta^s) = sum over the multiplication-by-theta^s matrix diagonal:
  // column j of the matrix is the coefficient vector of theta^{s+j}.
  trace_.assign(2 * f - 1, 0);
  for (int s = 0; s < 2 * f - 1; ++s) {
    mpz_class tr = 0;
    for (int j = 0; j < f; ++j) {
      int e = s + j;
      // coefficient of theta^j in theta^e (may need one extra reduction step)
      if (e < 2 * f - 1) {
        tr += theta_pow_[e][j];
      } else {
        // e <= 3f-3; reduce theta^{e} = theta^{f-1} * theta^{e-f+1}
        std::vector<mpz_class> acc(f, 0);
        const auto& hi = theta_pow_[f - 1];
        const auto& lo = theta_pow_[e - f + 1];
        // multiply hi * lo in the theta basis
        std::vector<mpz_class> prod(2 * f - 1, 0);
        for (int i1 = 0; i1 < f; ++i1)
          for (int i2 = 0; i2 < f; ++i2) prod[i1 + i2] += hi[i1] * lo[i2];
        for (int s2 = 2 * f - 2; s2 >= f; --s2) {
          mpz_class lead = prod[s2];
          prod[s2] = 0;
          for (int i = 0; i < f; ++i) prod[s2 - f + i] -= lead * modulus[i];
        }
        tr += prod[j];
      }
    }
    mpz_mod(tr.get_mpz_t(), tr.get_mpz_t(), p_prec.get_mpz_t());
    trace_[s] = tr;
  }
}

std::shared_ptr<const FieldParams> FieldParams::make(long p, int f, int precision, NormBase nb,
                                                     std::vector<long> modulus) {
  if (!detail::is_prime(p)) throw params_error("p must be prime");
  if (f < 1) throw params_error("degree must be >= 1");
  if (precision < 1) throw params_error("precision must be >= 1");
  auto fp = std::make_shared<FieldParams>();
  fp->p = p;
  fp->f = f;
  fp->precision = precision;
  fp->norm_base = nb;
  if (modulus.empty()) modulus = find_irreducible_modulus(p, f);
  if (int(modulus.size()) != f) throw params_error("modulus must have degree f");
  for (auto& c : modulus) c = ((c % p) + p) % p;
  if (f > 1 && !detail::irreducible_mod_p(modulus, p))
    throw params_error("modulus not irreducible mod p");
  fp->modulus = std::move(modulus);
  fp->build_tables();
  return fp;
}

std::shared_ptr<const FieldParams> FieldParams::make(long p, int f, int precision) {
  return make(p, f, precision, f == 1 ? NormBase::P : NormBase::Q);
}

}  // namespace pspectra
