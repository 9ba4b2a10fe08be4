#include "pspectra/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace pspectra {

namespace {

constexpr long kMaxCosets = 1L << 22;

long checked_pow(long b, int e, long limit) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > limit / b) throw params_error("window too large");
    r *= b;
  }
  return r;
}

// Cached tables of e^{2 pi i j / P}.
const std::vector<cplx>& root_table(long P) {
  static std::map<long, std::vector<cplx>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(P);
  if (it != cache.end()) return it->second;
  std::vector<cplx> t(P);
  for (long j = 0; j < P; ++j) {
    double ph = 2.0 * std::numbers::pi * double(j) / double(P);
    t[j] = cplx(std::cos(ph), std::sin(ph));
  }
  return cache.emplace(P, std::move(t)).first->second;
}

// In-place radix-p DFT of length n = p^s: x[k] <- sum_j x[j] w^{jk},
// w = e(±2 pi i / n) drawn from the global P-table (n divides P).
void dft_rec(cplx* x, cplx* scr, long n, long p, const cplx* roots, long P, bool conj_roots) {
  if (n == 1) return;
  long Q = n / p;
  for (long r = 0; r < p; ++r)
    for (long j = 0; j < Q; ++j) scr[r * Q + j] = x[j * p + r];
  std::copy(scr, scr + n, x);
  for (long r = 0; r < p; ++r) dft_rec(x + r * Q, scr, Q, p, roots, P, conj_roots);
  long step = P / n;
  for (long k = 0; k < n; ++k) {
    long km = k % Q;
    cplx acc = 0;
    for (long r = 0; r < p; ++r) {
      long idx = ((r * k) % n) * step;
      cplx w = roots[idx];
      if (conj_roots) w = std::conj(w);
      acc += w * x[r * Q + km];
    }
    scr[k] = acc;
  }
  std::copy(scr, scr + n, x);
}

}  // namespace

cplx character_eval(const Padic& x) {
  auto [a, b] = x.trace_frac();
  double ratio = mpz_get_d(a.get_mpz_t()) / mpz_get_d(b.get_mpz_t());
  double ph = 2.0 * std::numbers::pi * ratio;
  return cplx(std::cos(ph), std::sin(ph));
}

void TestFunction::init_sizes() {
  if (w_.span() < 0) throw params_error("window must have M + m >= 0");
  if (w_.span() > P_->precision) throw params_error("window exceeds working precision");
  P_pow_ = checked_pow(P_->p, w_.span(), kMaxCosets);
  int axes = w_.N * P_->f;
  long total = 1;
  for (int t = 0; t < axes; ++t) {
    if (total > kMaxCosets / std::max(P_pow_, 1L)) throw params_error("window too large");
    total *= P_pow_;
  }
  a_.assign(total, cplx(0, 0));
}

TestFunction::TestFunction(ParamsPtr P, Window w) : P_(std::move(P)), w_(w) { init_sizes(); }

TestFunction TestFunction::indicator_unit_ball(ParamsPtr P, int N) {
  TestFunction f(std::move(P), Window{N, 0, 0});
  f.a_[0] = 1.0;
  return f;
}

TestFunction TestFunction::indicator_coset(const PadicVector& center, int scale) {
  ParamsPtr P = center[0].params();
  int M = 0;
  for (const auto& c : center.components())
    if (!c.is_zero()) M = std::max(M, -c.valuation());
  TestFunction f(P, Window{center.dim(), M, scale});
  long idx = f.coset_index(center);
  if (idx < 0) throw params_error("coset center outside representable window");
  f.a_[idx] = 1.0;
  return f;
}

TestFunction TestFunction::random(ParamsPtr P, Window w, std::mt19937_64& rng) {
  TestFunction f(std::move(P), w);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& v : f.a_) v = cplx(U(rng), U(rng));
  return f;
}

PadicVector TestFunction::coset_rep(long flat) const {
  const int f = P_->f;
  std::vector<Padic> comps;
  comps.reserve(w_.N);
  long rem = flat;
  for (int i = 0; i < w_.N; ++i) {
    std::vector<mpz_class> coeffs(f, 0);
    for (int j = 0; j < f; ++j) {
      coeffs[j] = rem % P_pow_;
      rem /= P_pow_;
    }
    bool allz = std::all_of(coeffs.begin(), coeffs.end(),
                            [](const mpz_class& c) { return c == 0; });
    if (allz)
      comps.push_back(Padic::zero(P_));
    else
      comps.push_back(Padic::from_unit(P_, -w_.M, std::move(coeffs), P_->precision));
  }
  return PadicVector(std::move(comps));
}

int TestFunction::rep_shell_exp(long flat) const {
  long rem = flat;
  const int f = P_->f;
  int best = std::numeric_limits<int>::min();
  for (int i = 0; i < w_.N; ++i) {
    int minval = std::numeric_limits<int>::max();
    for (int j = 0; j < f; ++j) {
      long c = rem % P_pow_;
      rem /= P_pow_;
      if (c == 0) continue;
      int v = 0;
      while (c % P_->p == 0) {
        c /= P_->p;
        ++v;
      }
      minval = std::min(minval, v);
    }
    if (minval == std::numeric_limits<int>::max()) continue;  // zero coordinate
    best = std::max(best, w_.M - minval);
  }
  return best;
}

long TestFunction::coset_index(const PadicVector& x) const {
  const int f = P_->f;
  long flat = 0;
  long mult = 1;
  for (int i = 0; i < w_.N; ++i) {
    const Padic& c = x[i];
    if (!c.is_zero()) {
      int v = c.valuation();
      if (v < -w_.M) return -1;  // outside support
      if (v + c.precision() < w_.m)
        throw precision_error("point too coarse for window evaluation");
    }
    for (int j = 0; j < f; ++j) {
      long digit_code;
      if (c.is_zero()) {
        digit_code = 0;
      } else {
        // coefficient of theta^j in p^{M} * x_i, reduced mod p^{M+m}
        mpz_class coeff = c.unit_coeffs()[j];
        mpz_class shifted = coeff * P_->p_pow(c.valuation() + w_.M);
        mpz_class mod;
        mpz_class Pm = P_->p_pow(w_.span());
        mpz_mod(mod.get_mpz_t(), shifted.get_mpz_t(), Pm.get_mpz_t());
        digit_code = mpz_get_si(mod.get_mpz_t());
      }
      flat += digit_code * mult;
      mult *= P_pow_;
    }
  }
  return flat;
}

cplx TestFunction::eval(const PadicVector& x) const {
  long idx = coset_index(x);
  if (idx < 0) return 0.0;
  return a_[idx];
}

cplx TestFunction::integrate() const {
  cplx s = 0;
  for (const auto& v : a_) s += v;
  return s * coset_measure();
}

double TestFunction::coset_measure() const {
  double r = 1.0;
  for (int i = 0; i < w_.m * w_.N; ++i) r /= P_->q;
  for (int i = 0; i < -w_.m * w_.N; ++i) r *= P_->q;
  return r;
}

cplx TestFunction::inner(const TestFunction& o) const {
  TestFunction A = *this, B = o;
  to_common_window(A, B);
  cplx s = 0;
  for (long i = 0; i < A.size(); ++i) s += A.a_[i] * std::conj(B.a_[i]);
  return s * A.coset_measure();
}

double TestFunction::norm2() const {
  double s = 0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s * coset_measure());
}

double TestFunction::sup_norm() const {
  double s = 0;
  for (const auto& v : a_) s = std::max(s, std::abs(v));
  return s;
}

TestFunction TestFunction::fourier(bool inverse) const {
  if (w_.span() == 0) {
    // single coset per axis: the transform is the identity on the amplitude
    TestFunction out(P_, w_.dual());
    double scale = coset_measure();
    for (long i = 0; i < size(); ++i) out.a_[i] = a_[i] * scale;
    return out;
  }
  const long P = P_pow_;
  const int axes = w_.N * P_->f;
  const auto& roots = root_table(P);
  TestFunction out(P_, w_.dual());
  std::vector<cplx> data = a_;
  std::vector<cplx> line(P), scr(P);
  // per-axis radix-p DFT
  for (int t = 0; t < axes; ++t) {
    long stride = 1;
    for (int s = 0; s < t; ++s) stride *= P;
    long nlines = long(data.size()) / P;
    for (long l = 0; l < nlines; ++l) {
      // index of line l: interleave low (within stride) and high parts
      long low = l % stride;
      long high = l / stride;
      long base = high * stride * P + low;
      for (long k = 0; k < P; ++k) line[k] = data[base + k * stride];
      dft_rec(line.data(), scr.data(), P, P_->p, roots.data(), P, inverse);
      for (long k = 0; k < P; ++k) data[base + k * stride] = line[k];
    }
  }
  // Gram remap for f > 1: out[B] = S[G B] per coordinate block
  if (P_->f > 1) {
    const int f = P_->f;
    mpz_class Pm = P;
    std::vector<long> G(f * f);
    for (int j = 0; j < f; ++j)
      for (int l = 0; l < f; ++l) {
        mpz_class g;
        mpz_mod(g.get_mpz_t(), P_->trace_theta(j + l).get_mpz_t(), Pm.get_mpz_t());
        G[j * f + l] = mpz_get_si(g.get_mpz_t());
      }
    long block = 1;
    for (int j = 0; j < f; ++j) block *= P;
    std::vector<long> perm(block);
    std::vector<long> B(f), Bp(f);
    for (long code = 0; code < block; ++code) {
      long c = code;
      for (int j = 0; j < f; ++j) {
        B[j] = c % P;
        c /= P;
      }
      for (int j = 0; j < f; ++j) {
        unsigned long long acc = 0;
        for (int l = 0; l < f; ++l)
          acc = (acc + (unsigned long long)(G[j * f + l]) * (unsigned long long)(B[l])) % P;
        Bp[j] = long(acc);
      }
      long enc = 0, mult = 1;
      for (int j = 0; j < f; ++j) {
        enc += Bp[j] * mult;
        mult *= P;
      }
      perm[code] = enc;
    }
    std::vector<cplx> tmp(data.size());
    for (int i = 0; i < w_.N; ++i) {
      long inner_sz = 1;
      for (int s = 0; s < i * f; ++s) inner_sz *= P;
      long outer_sz = long(data.size()) / (inner_sz * block);
      for (long hi = 0; hi < outer_sz; ++hi)
        for (long bl = 0; bl < block; ++bl)
          for (long lo = 0; lo < inner_sz; ++lo)
            tmp[(hi * block + bl) * inner_sz + lo] =
                data[(hi * block + perm[bl]) * inner_sz + lo];
      data.swap(tmp);
    }
  }
  double scale = coset_measure();
  for (long i = 0; i < out.size(); ++i) out.a_[i] = data[i] * scale;
  return out;
}

TestFunction TestFunction::convolve(const TestFunction& o) const {
  TestFunction A = *this, B = o;
  to_common_window(A, B);
  TestFunction FA = A.fourier(false), FB = B.fourier(false);
  for (long i = 0; i < FA.size(); ++i) FA.a_[i] *= FB.a_[i];
  return FA.fourier(true);
}

TestFunction TestFunction::convolve_direct(const TestFunction& o) const {
  TestFunction A = *this, B = o;
  to_common_window(A, B);
  TestFunction out(A.P_, A.w_);
  double meas = A.coset_measure();
  for (long i = 0; i < out.size(); ++i) {
    PadicVector x = out.coset_rep(i);
    cplx acc = 0;
    for (long jy = 0; jy < B.size(); ++jy) {
      PadicVector y = B.coset_rep(jy);
      acc += A.eval(x - y) * B.a_[jy];
    }
    out.a_[i] = acc * meas;
  }
  return out;
}

TestFunction TestFunction::refined(int M2, int m2) const {
  if (M2 < w_.M || m2 < w_.m) throw params_error("refined window must contain the original");
  if (M2 == w_.M && m2 == w_.m) return *this;
  TestFunction out(P_, Window{w_.N, M2, m2});
  long shiftM = checked_pow(P_->p, M2 - w_.M, kMaxCosets);
  long Pold = P_pow_;
  const int axes = w_.N * P_->f;
  for (long idx = 0; idx < out.size(); ++idx) {
    long rem = idx;
    long oldflat = 0, mult = 1;
    bool outside = false;
    for (int t = 0; t < axes; ++t) {
      long C2 = rem % out.P_pow_;
      rem /= out.P_pow_;
      if (C2 % shiftM != 0) {
        outside = true;
        break;
      }
      long C = (C2 / shiftM) % Pold;
      oldflat += C * mult;
      mult *= Pold;
    }
    out.a_[idx] = outside ? cplx(0, 0) : a_[oldflat];
  }
  return out;
}

TestFunction TestFunction::restricted(int M2, int m2, double eps) const {
  if (M2 > w_.M || m2 > w_.m) throw params_error("restricted window must shrink");
  TestFunction out(P_, Window{w_.N, M2, m2});
  // accumulate: every old coset maps into a new one or lies outside
  long shiftM = checked_pow(P_->p, w_.M - M2, kMaxCosets);
  const int axes = w_.N * P_->f;
  std::vector<bool> seen(out.size(), false);
  for (long idx = 0; idx < size(); ++idx) {
    long rem = idx;
    long nf = 0, mult = 1;
    bool outside = false;
    for (int t = 0; t < axes; ++t) {
      long C = rem % P_pow_;
      rem /= P_pow_;
      if (C % shiftM != 0) outside = true;
      long C2 = (C / shiftM) % out.P_pow_;
      nf += C2 * mult;
      mult *= out.P_pow_;
    }
    if (outside) {
      if (std::abs(a_[idx]) > eps)
        throw params_error("restriction drops significant support mass");
      continue;
    }
    if (!seen[nf]) {
      out.a_[nf] = a_[idx];
      seen[nf] = true;
    } else if (std::abs(out.a_[nf] - a_[idx]) > eps) {
      throw params_error("function not constant on the coarser cosets");
    }
  }
  return out;
}

void TestFunction::to_common_window(TestFunction& a, TestFunction& b) {
  if (!a.P_->same_field(*b.P_)) throw params_error("field params mismatch");
  if (a.w_.N != b.w_.N) throw params_error("dimension mismatch");
  int M = std::max(a.w_.M, b.w_.M), m = std::max(a.w_.m, b.w_.m);
  a = a.refined(M, m);
  b = b.refined(M, m);
}

TestFunction& TestFunction::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

TestFunction& TestFunction::operator+=(const TestFunction& o) {
  TestFunction B = o;
  TestFunction A = *this;
  to_common_window(A, B);
  for (long i = 0; i < A.size(); ++i) A.a_[i] += B.a_[i];
  *this = std::move(A);
  return *this;
}

TestFunction& TestFunction::operator-=(const TestFunction& o) {
  TestFunction B = o;
  TestFunction A = *this;
  to_common_window(A, B);
  for (long i = 0; i < A.size(); ++i) A.a_[i] -= B.a_[i];
  *this = std::move(A);
  return *this;
}

TestFunction TestFunction::multiplied(const std::vector<double>& profile) const {
  if (long(profile.size()) != size()) throw params_error("profile size mismatch");
  TestFunction out = *this;
  for (long i = 0; i < size(); ++i) out.a_[i] *= profile[i];
  return out;
}

std::string TestFunction::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = P_->p;
  j["f"] = P_->f;
  j["norm_base"] = P_->norm_base == NormBase::P ? "P" : "Q";
  j["precision"] = P_->precision;
  j["window"] = {{"N", w_.N}, {"M", w_.M}, {"m", w_.m}};
  auto values = nlohmann::ordered_json::array();
  const int f = P_->f;
  for (long idx = 0; idx < size(); ++idx) {
    if (a_[idx] == cplx(0, 0)) continue;
    nlohmann::ordered_json e;
    auto rep = nlohmann::ordered_json::array();
    long rem = idx;
    for (int i = 0; i < w_.N; ++i) {
      // base-q digits of the representative, positions -M .. m-1
      std::vector<long> coeffs(f);
      for (int j2 = 0; j2 < f; ++j2) {
        coeffs[j2] = rem % P_pow_;
        rem /= P_pow_;
      }
      auto digits = nlohmann::ordered_json::array();
      for (int pos = 0; pos < w_.span(); ++pos) {
        long enc = 0, pw = 1;
        for (int j2 = 0; j2 < f; ++j2) {
          enc += (coeffs[j2] % P_->p) * pw;
          coeffs[j2] /= P_->p;
          pw *= P_->p;
        }
        digits.push_back(enc);
      }
      rep.push_back(digits);
    }
    e["rep"] = rep;
    e["re"] = a_[idx].real();
    e["im"] = a_[idx].imag();
    values.push_back(e);
  }
  j["values"] = values;
  return j.dump();
}

TestFunction TestFunction::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  long p = j.at("p");
  int f = j.at("f");
  NormBase nb = j.value("norm_base", std::string("P")) == "Q" ? NormBase::Q : NormBase::P;
  int prec = j.value("precision", 32);
  auto params = FieldParams::make(p, f, prec, nb);
  Window w{j.at("window").at("N"), j.at("window").at("M"), j.at("window").at("m")};
  TestFunction out(params, w);
  for (const auto& e : j.at("values")) {
    long flat = 0, mult = 1;
    for (const auto& coord : e.at("rep")) {
      std::vector<long> coeffs(f, 0);
      long pw = 1;
      int pos = 0;
      for (const auto& d : coord) {
        long enc = d.get<long>();
        for (int j2 = 0; j2 < f; ++j2) {
          coeffs[j2] += (enc % p) * pw;
          enc /= p;
        }
        pw *= p;
        ++pos;
      }
      for (int j2 = 0; j2 < f; ++j2) {
        flat += coeffs[j2] * mult;
        mult *= out.P_pow_;
      }
    }
    out.a_[flat] = cplx(e.at("re").get<double>(), e.at("im").get<double>());
  }
  return out;
}

}  // namespace pspectra
