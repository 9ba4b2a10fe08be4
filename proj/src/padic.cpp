#include "pspectra/padic.hpp"

#include <algorithm>
#include <sstream>

namespace pspectra {

namespace {

// Reduce each coefficient mod p^k.
void reduce_coeffs(std::vector<mpz_class>& u, const mpz_class& pk) {
  for (auto& c : u) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
}

// Largest e <= cap with p^e dividing all coefficients.
int common_p_valuation(const std::vector<mpz_class>& u, const mpz_class& p, int cap) {
  int v = 0;
  while (v < cap) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), mpz_get_ui(p.get_mpz_t()), (unsigned long)(v + 1));
    bool all = true;
    for (const auto& c : u) {
      if (!mpz_divisible_p(c.get_mpz_t(), pw.get_mpz_t())) {
        all = false;
        break;
      }
    }
    if (!all) break;
    ++v;
  }
  return v;
}

// Multiply theta-basis coefficient vectors mod (modulus, p^k).
std::vector<mpz_class> theta_mul(const FieldParams& P, const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b, const mpz_class& pk) {
  int f = P.f;
  if (f == 1) {
    std::vector<mpz_class> r(1);
    r[0] = a[0] * b[0];
    mpz_mod(r[0].get_mpz_t(), r[0].get_mpz_t(), pk.get_mpz_t());
    return r;
  }
  std::vector<mpz_class> prod(2 * f - 1, 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) prod[i + j] += a[i] * b[j];
  std::vector<mpz_class> r(f, 0);
  for (int s = 0; s < 2 * f - 1; ++s) {
    if (prod[s] == 0) continue;
    const auto& row = P.theta_power(s);
    for (int j = 0; j < f; ++j) r[j] += prod[s] * row[j];
  }
  reduce_coeffs(r, pk);
  return r;
}

}  // namespace

void Padic::normalize(int known_end) {
  // known_end: the value is known modulo p^{known_end} (absolute exponent).
  if (zero_) return;
  const auto& P = *P_;
  mpz_class pk;
  int span = known_end - val_;
  if (span <= 0) {
    zero_ = true;
    u_.clear();
    return;
  }
  mpz_ui_pow_ui(pk.get_mpz_t(), (unsigned long)P.p, (unsigned long)span);
  reduce_coeffs(u_, pk);
  bool allz = std::all_of(u_.begin(), u_.end(), [](const mpz_class& c) { return c == 0; });
  if (allz) {
    zero_ = true;
    u_.clear();
    return;
  }
  int shift = common_p_valuation(u_, P.p_mpz, span - 1);
  if (shift > 0) {
    mpz_class pw = P.p_pow(shift);
    for (auto& c : u_) c /= pw;
    val_ += shift;
    span -= shift;
  }
  prec_ = std::min(span, P.precision);
  mpz_class pp = P.p_pow(prec_);
  reduce_coeffs(u_, pp);
}

void Padic::check_params(const Padic& o) const {
  if (!P_ || !o.P_ || !P_->same_field(*o.P_)) throw params_error("field params mismatch");
}

Padic Padic::from_mpz(ParamsPtr P, mpz_class v) {
  Padic x;
  x.P_ = std::move(P);
  if (v == 0) {
    x.zero_ = true;
    return x;
  }
  x.zero_ = false;
  x.val_ = 0;
  x.u_.assign(x.P_->f, 0);
  x.u_[0] = std::move(v);
  bool neg = x.u_[0] < 0;
  // strip p factors first so precision counts significant digits
  while (mpz_divisible_p(x.u_[0].get_mpz_t(), x.P_->p_mpz.get_mpz_t())) {
    x.u_[0] /= x.P_->p_mpz;
    ++x.val_;
  }
  (void)neg;
  x.prec_ = x.P_->precision;
  mpz_mod(x.u_[0].get_mpz_t(), x.u_[0].get_mpz_t(), x.P_->p_prec.get_mpz_t());
  return x;
}

Padic Padic::from_rational(ParamsPtr P, long num, long den) {
  if (den == 0) throw params_error("zero denominator");
  Padic n = from_mpz(P, num);
  Padic d = from_mpz(P, den);
  return n / d;
}

Padic Padic::from_unit(ParamsPtr P, int val, std::vector<mpz_class> coeffs, int prec) {
  Padic x;
  x.P_ = std::move(P);
  if (int(coeffs.size()) != x.P_->f) throw params_error("coefficient count != f");
  x.zero_ = false;
  x.val_ = val;
  x.u_ = std::move(coeffs);
  int end = val + std::min(prec, x.P_->precision);
  x.normalize(end);
  return x;
}

Padic Padic::theta(ParamsPtr P) {
  if (P->f < 2) throw params_error("theta requires f > 1");
  std::vector<mpz_class> c(P->f, 0);
  c[1] = 1;
  int prec = P->precision;
  return from_unit(std::move(P), 0, std::move(c), prec);
}

int Padic::valuation() const {
  if (zero_) throw precision_error("valuation of exact zero");
  return val_;
}

long Padic::digit(int i) const {
  if (zero_) return 0;
  if (i < 0 || i >= prec_) throw precision_error("digit index beyond known precision");
  const auto& P = *P_;
  mpz_class pi = P.p_pow(i);
  long enc = 0, pw = 1;
  for (int j = 0; j < P.f; ++j) {
    mpz_class d = (u_[j] / pi) % P.p_mpz;
    enc += mpz_get_si(d.get_mpz_t()) * pw;
    pw *= P.p;
  }
  return enc;
}

FqElem Padic::leading_digit() const {
  if (zero_) throw precision_error("leading digit of exact zero");
  return P_->fq_decode(digit(0));
}

Padic Padic::operator-() const {
  if (zero_) return *this;
  Padic r = *this;
  mpz_class pk = P_->p_pow(prec_);
  for (auto& c : r.u_) {
    c = -c;
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pk.get_mpz_t());
  }
  return r;
}

Padic add_impl(const Padic& a, const Padic& b, bool sub) {
  a.check_params(b);
  if (a.zero_) return sub ? -b : b;
  if (b.zero_) return a;
  const auto& P = *a.P_;
  int val = std::min(a.val_, b.val_);
  int end = std::min(a.val_ + a.prec_, b.val_ + b.prec_);
  Padic r;
  r.P_ = a.P_;
  r.zero_ = false;
  r.val_ = val;
  r.u_.assign(P.f, 0);
  mpz_class sa = P.p_pow(a.val_ - val), sb = P.p_pow(b.val_ - val);
  for (int j = 0; j < P.f; ++j) {
    r.u_[j] = a.u_[j] * sa;
    if (sub)
      r.u_[j] -= b.u_[j] * sb;
    else
      r.u_[j] += b.u_[j] * sb;
  }
  r.normalize(end);
  return r;
}

Padic Padic::operator+(const Padic& o) const { return add_impl(*this, o, false); }
Padic Padic::operator-(const Padic& o) const { return add_impl(*this, o, true); }

Padic Padic::operator*(const Padic& o) const {
  check_params(o);
  if (zero_ || o.zero_) return zero(P_);
  const auto& P = *P_;
  Padic r;
  r.P_ = P_;
  r.zero_ = false;
  r.val_ = val_ + o.val_;
  r.prec_ = std::min(prec_, o.prec_);
  mpz_class pk = P.p_pow(r.prec_);
  r.u_ = theta_mul(P, u_, o.u_, pk);
  // unit * unit stays a unit; no renormalization needed beyond the reduction
  return r;
}

Padic Padic::inverse() const {
  if (zero_) throw precision_error("division by exact zero");
  const auto& P = *P_;
  Padic r;
  r.P_ = P_;
  r.zero_ = false;
  r.val_ = -val_;
  r.prec_ = prec_;
  // Invert the unit part by Hensel/Newton lifting: v <- v(2 - u v).
  // Start from the residue-field inverse.
  FqElem u0{std::vector<long>(P.f)};
  for (int j = 0; j < P.f; ++j) {
    mpz_class d = u_[j] % P.p_mpz;
    u0.c[j] = mpz_get_si(d.get_mpz_t());
  }
  FqElem i0 = P.fq_inv(u0);
  std::vector<mpz_class> v(P.f);
  for (int j = 0; j < P.f; ++j) v[j] = i0.c[j];
  int k = 1;
  while (k < prec_) {
    k = std::min(2 * k, prec_);
    mpz_class pk = P.p_pow(k);
    auto uv = theta_mul(P, u_, v, pk);
    uv[0] = 2 - uv[0];
    for (int j = 1; j < P.f; ++j) uv[j] = -uv[j];
    reduce_coeffs(uv, pk);
    v = theta_mul(P, v, uv, pk);
  }
  r.u_ = std::move(v);
  return r;
}

Padic Padic::operator/(const Padic& o) const {
  check_params(o);
  if (o.zero_) throw precision_error("division by exact zero");
  if (zero_) return zero(P_);
  return *this * o.inverse();
}

Padic Padic::shift(int e) const {
  if (zero_) return *this;
  Padic r = *this;
  r.val_ += e;
  return r;
}

bool Padic::same_at_precision(const Padic& o) const {
  Padic d = *this - o;
  return d.is_zero();
}

Padic Padic::trace_to_qp(ParamsPtr qp_params) const {
  if (qp_params->f != 1 || qp_params->p != P_->p) throw params_error("trace target must be Q_p");
  if (zero_) return zero(std::move(qp_params));
  const auto& P = *P_;
  // Tr(p^val * sum c_j theta^j) = p^val * sum c_j Tr(theta^j)
  mpz_class t = 0;
  for (int j = 0; j < P.f; ++j) t += u_[j] * P.trace_theta(j);
  Padic r = Padic::from_mpz(qp_params, t);
  if (r.is_zero()) return r;
  r = r.shift(val_);
  // significant range inherited from this value
  int end = val_ + prec_;
  r.normalize(end);
  return r;
}

std::pair<mpz_class, mpz_class> Padic::trace_frac() const {
  // frac_p(Tr(x)) = (negative-valuation tail of the trace) as a/p^k in [0,1).
  if (zero_) return {mpz_class(0), mpz_class(1)};
  const auto& P = *P_;
  if (val_ >= 0) return {mpz_class(0), mpz_class(1)};
  int k = -val_;
  if (prec_ < k) throw precision_error("insufficient precision for character phase");
  mpz_class t = 0;
  for (int j = 0; j < P.f; ++j) t += u_[j] * P.trace_theta(j);
  mpz_class pk = P.p_pow(k);
  mpz_class a;
  mpz_mod(a.get_mpz_t(), t.get_mpz_t(), pk.get_mpz_t());
  // reduce the fraction a / p^k
  while (a != 0 && mpz_divisible_p(a.get_mpz_t(), P.p_mpz.get_mpz_t()) && pk > 1) {
    a /= P.p_mpz;
    pk /= P.p_mpz;
  }
  if (a == 0) pk = 1;
  return {a, pk};
}

std::string Padic::to_string(int max_digits) const {
  if (zero_) return "0";
  std::ostringstream os;
  os << "p^" << val_ << "*(";
  int n = std::min(prec_, max_digits);
  for (int i = 0; i < n; ++i) {
    if (i) os << ",";
    os << digit(i);
  }
  if (prec_ > n) os << ",..";
  os << ")";
  return os.str();
}

int Padic::compare_canonical(const Padic& a, const Padic& b) {
  if (a.zero_ && b.zero_) return 0;
  if (a.zero_) return -1;
  if (b.zero_) return 1;
  if (a.val_ != b.val_) return a.val_ < b.val_ ? -1 : 1;
  int n = std::min(a.prec_, b.prec_);
  for (int i = 0; i < n; ++i) {
    long da = a.digit(i), db = b.digit(i);
    if (da != db) return da < db ? -1 : 1;
  }
  return 0;
}

std::optional<Padic> padic_sqrt(const Padic& x) {
  if (x.is_zero()) throw precision_error("sqrt of exact zero");
  const auto& Pp = *x.params();
  int v = x.valuation();
  if (v % 2 != 0) return std::nullopt;  // odd valuation: no root
  // Work with the unit part u, target r with r^2 = u.
  Padic u = x.shift(-v);
  int prec = u.precision();
  const long p = Pp.p;
  auto params = x.params();
  if (p != 2) {
    FqElem u0 = u.leading_digit();
    auto roots = Pp.fq_sqrt(u0);
    if (roots.empty()) return std::nullopt;
    // Hensel/Newton: r <- (r + u/r) / 2, doubling precision each step.
    std::vector<mpz_class> r(Pp.f);
    for (int j = 0; j < Pp.f; ++j) r[j] = roots[0].c[j];
    Padic rcur = Padic::from_unit(params, 0, r, 1);
    Padic two = Padic::from_long(params, 2);
    int k = 1;
    while (k < prec) {
      k = std::min(2 * k, prec);
      // lift to precision k: all operands at full stored precision; Newton is
      // self-correcting so intermediate truncation is harmless
      rcur = (rcur + u / rcur) / two;
    }
    // canonical choice: smaller digit sequence among r, -r
    Padic neg = -rcur;
    Padic best = Padic::compare_canonical(rcur, neg) <= 0 ? rcur : neg;
    Padic out = best.shift(v / 2);
    return out;
  }
  // p = 2: search r0 with r0^2 = u mod 8, then lift digit by digit.
  // Only units with a square residue pattern mod 8 have roots.
  if (prec < 3) throw precision_error("p=2 sqrt needs >= 3 digits");
  const int f = Pp.f;
  mpz_class eight = 8;
  std::vector<mpz_class> r0(f, 0);
  long total = 1;
  for (int i = 0; i < 3 * f; ++i) total *= 2;
  bool found = false;
  for (long code = 0; code < total && !found; ++code) {
    long c = code;
    std::vector<mpz_class> cand(f);
    for (int j = 0; j < f; ++j) {
      cand[j] = c % 8;
      c /= 8;
    }
    // must be a unit
    bool unit = false;
    for (int j = 0; j < f; ++j)
      if (mpz_odd_p(cand[j].get_mpz_t())) unit = true;
    if (!unit) continue;
    auto sq = theta_mul(Pp, cand, cand, eight);
    bool ok = true;
    for (int j = 0; j < f; ++j) {
      mpz_class uj;
      mpz_mod(uj.get_mpz_t(), u.unit_coeffs()[j].get_mpz_t(), eight.get_mpz_t());
      if (sq[j] != uj) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r0 = cand;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  // Lift: r_{k+1} = r_k + 2^{k-1} s with s solving r*s = (u - r^2)/2^k in F_2f.
  std::vector<mpz_class> r = r0;
  for (int k = 3; k < prec; ++k) {
    mpz_class pk1 = Pp.p_pow(k + 1);
    auto sq = theta_mul(Pp, r, r, pk1);
    std::vector<mpz_class> diff(f);
    mpz_class twok = Pp.p_pow(k);
    bool needs = false;
    for (int j = 0; j < f; ++j) {
      diff[j] = u.unit_coeffs()[j] - sq[j];
      mpz_mod(diff[j].get_mpz_t(), diff[j].get_mpz_t(), pk1.get_mpz_t());
      if (diff[j] != 0) needs = true;
    }
    if (!needs) continue;
    // c = diff / 2^k in residue field; s = c / r mod 2
    FqElem cbar{std::vector<long>(f)}, rbar{std::vector<long>(f)};
    for (int j = 0; j < f; ++j) {
      mpz_class cj = diff[j] / twok;
      cbar.c[j] = mpz_get_si(mpz_class(cj % 2).get_mpz_t());
      rbar.c[j] = mpz_get_si(mpz_class(r[j] % 2).get_mpz_t());
    }
    FqElem s = Pp.fq_mul(cbar, Pp.fq_inv(rbar));
    mpz_class tw = Pp.p_pow(k - 1);
    for (int j = 0; j < f; ++j) r[j] += s.c[j] * tw;
  }
  // Determined mod 2^{prec-1}: report one digit less than the operand.
  Padic rcur = Padic::from_unit(params, 0, r, std::max(1, prec - 1));
  Padic neg = -rcur;
  Padic best = Padic::compare_canonical(rcur, neg) <= 0 ? rcur : neg;
  return best.shift(v / 2);
}

PadicVector PadicVector::zero(ParamsPtr P, int N) {
  std::vector<Padic> c;
  c.reserve(N);
  for (int i = 0; i < N; ++i) c.push_back(Padic::zero(P));
  return PadicVector(std::move(c));
}

PNorm PadicVector::norm() const {
  PNorm best;  // zero
  for (const auto& x : c_) {
    PNorm n = x.abs();
    if (best < n) best = n;
  }
  return best;
}

PadicVector PadicVector::operator+(const PadicVector& o) const {
  std::vector<Padic> r;
  r.reserve(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.push_back(c_[i] + o.c_[i]);
  return PadicVector(std::move(r));
}

PadicVector PadicVector::operator-(const PadicVector& o) const {
  std::vector<Padic> r;
  r.reserve(c_.size());
  for (size_t i = 0; i < c_.size(); ++i) r.push_back(c_[i] - o.c_[i]);
  return PadicVector(std::move(r));
}

PadicVector PadicVector::shift(int e) const {
  std::vector<Padic> r;
  r.reserve(c_.size());
  for (const auto& x : c_) r.push_back(x.shift(e));
  return PadicVector(std::move(r));
}

std::string PadicVector::to_string() const {
  std::string s = "(";
  for (size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ", ";
    s += c_[i].to_string(4);
  }
  return s + ")";
}

}  // namespace pspectra
