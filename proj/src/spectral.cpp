#include "pspectra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pspectra {

RadialSymbol RadialSymbol::power_law(const FieldParams& P, double lambda, double alpha) {
  RadialSymbol s;
  s.lambda = lambda;
  s.alpha = alpha;
  s.A1 = s.A2 = 1.0;
  s.gamma1 = s.gamma2 = alpha;
  s.base = P.norm_base_value();
  s.validate(P);
  return s;
}

double RadialSymbol::shell_value(int e) const {
  if (custom) return custom(e);
  return std::pow(base, alpha * e);
}

void RadialSymbol::validate(const FieldParams& P) const {
  double b = P.norm_base_value();
  if (base != b) throw params_error("symbol base does not match field params");
  if (lambda > shell_value(1) + 1e-15) throw params_error("lambda must be <= f~(1)");
  double prev = lambda;
  for (int e = 1; e <= 8; ++e) {
    double v = value_at_norm_exp(e);
    if (v + 1e-15 < prev) throw params_error("shell rule must be nondecreasing");
    prev = v;
  }
}

double kernel_tail_bound(const RadialSymbol& sym, const FieldParams& P, int N, double t,
                         int nu_max) {
  // |shell term| <= vol(shell nu) * exp(-t (f~(nu) - lambda))
  //             <= q^{nu N} exp(-t (A1 base^{g1 nu} - lambda))
  double q = P.q;
  double nb = P.norm_base_value();
  double tail = 0;
  for (int nu = nu_max + 1; nu <= nu_max + 400; ++nu) {
    double expo = -t * (sym.A1 * std::pow(nb, sym.gamma1 * nu) - sym.lambda);
    double term = std::pow(q, double(nu) * N) * std::exp(expo);
    tail += term;
    if (term < 1e-300 || term < tail * 1e-18) break;
  }
  return tail;
}

int effective_cutoff(const RadialSymbol& sym, const FieldParams& P, int N, double t, double tol,
                     int nu_cap) {
  for (int nu = 1; nu <= nu_cap; ++nu)
    if (kernel_tail_bound(sym, P, N, t, nu) <= tol) return nu;
  return nu_cap;
}

std::vector<double> symbol_profile(const RadialSymbol& sym, const ExtendedMap& sigma,
                                   const TestFunction& holder) {
  long n = holder.size();
  std::vector<double> prof(n);
  for (long i = 0; i < n; ++i) {
    PadicVector rep = holder.coset_rep(i);
    PNorm nr = sigma.image_norm(rep);
    prof[i] = nr.zero ? sym.lambda : sym.value_at_norm_exp(int(nr.exp));
  }
  return prof;
}

std::vector<double> symbol_profile_group(const RadialSymbol& sym, const GroupAction& G,
                                         const TestFunction& holder) {
  std::vector<double> acc(holder.size(), 0.0);
  for (const auto& sigma : G.maps) {
    auto p = symbol_profile(sym, sigma, holder);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
  }
  for (auto& v : acc) v /= double(G.maps.size());
  return acc;
}

HeatKernel::HeatKernel(RadialSymbol sym, GroupAction action, double t, int nu_max, double tol)
    : sym_(std::move(sym)), act_(std::move(action)), t_(t), nu_max_(nu_max) {
  if (t_ <= 0) throw params_error("kernel time must be positive");
  const FieldParams& P = *act_.maps.front().params();
  int N = act_.maps.front().dim();
  nu_eff_ = effective_cutoff(sym_, P, N, t_, tol, nu_max_);
  tail_ = kernel_tail_bound(sym_, P, N, t_, nu_eff_);
  if (tail_ > tol) throw params_error("kernel tail bound exceeds tolerance; raise nu_max");
}

TestFunction HeatKernel::materialize(int support_exp) const {
  ParamsPtr P = act_.maps.front().params();
  int N = act_.maps.front().dim();
  TestFunction mult(P, Window{N, nu_eff_, support_exp});
  auto prof = symbol_profile_group(sym_, act_, mult);
  for (long i = 0; i < mult.size(); ++i)
    mult.at(i) = std::exp(-t_ * (prof[i] - sym_.lambda));
  return mult.fourier(true);
}

TestFunction HeatKernel::literal_group_kernel(int support_exp) const {
  ParamsPtr P = act_.maps.front().params();
  int N = act_.maps.front().dim();
  TestFunction mult(P, Window{N, nu_eff_, support_exp});
  std::vector<double> total(mult.size(), 0.0);
  for (const auto& sigma : act_.maps) {
    auto p = symbol_profile(sym_, sigma, mult);
    for (size_t i = 0; i < total.size(); ++i) total[i] += p[i] - sym_.lambda;
  }
  for (long i = 0; i < mult.size(); ++i)
    mult.at(i) = std::exp(-t_ * total[i]) / double(act_.group.order());
  return mult.fourier(true);
}

double HeatKernel::eval(const PadicVector& x) const {
  PNorm n = x.norm();
  if (!n.zero && n.exp > 0) return 0.0;  // support inside the unit polydisk
  if (!cache_) cache_ = materialize(0);
  return cache_->eval(x).real();
}

double HeatKernel::eval_radial_closed_form(const RadialSymbol& sym, const FieldParams& P, int N,
                                           double t, int x_shell_exp, int nu_max) {
  if (x_shell_exp > 0) return 0.0;
  double q = P.q;
  double qn = std::pow(q, double(N));
  auto E = [&](int nu) { return std::exp(-t * (sym.shell_value(nu) - sym.lambda)); };
  double z = 1.0;
  long long cap = (x_shell_exp == std::numeric_limits<int>::min())
                      ? (long long)nu_max
                      : std::min<long long>(-(long long)x_shell_exp, nu_max);
  double qpow = 1.0;  // q^{(nu-1)N}
  for (long long nu = 1; nu <= cap; ++nu) {
    z += E(int(nu)) * (qpow * qn - qpow);
    qpow *= qn;
  }
  if (x_shell_exp != std::numeric_limits<int>::min()) {
    long long nu0 = 1 - (long long)x_shell_exp;
    if (nu0 <= nu_max) {
      double qm = std::pow(q, double(-x_shell_exp) * N);
      z -= E(int(nu0)) * qm;
    }
  }
  return z;
}

TestFunction apply_multiplier(OperatorKind kind, const RadialSymbol& sym, const GroupAction& G,
                              int sigma_index, const TestFunction& psi) {
  TestFunction in = psi;
  if (in.window().M < 0) in = in.refined(0, in.window().m);
  TestFunction hat = in.fourier(false);
  std::vector<double> prof;
  if (kind == OperatorKind::HG)
    prof = symbol_profile_group(sym, G, hat);
  else
    prof = symbol_profile(sym, G.maps.at(sigma_index), hat);
  if (kind != OperatorKind::J)
    for (auto& v : prof) v -= sym.lambda;
  return hat.multiplied(prof).fourier(true);
}

WaveletIndexSet wavelet_indices(const FieldParams& P, int N, int gamma) {
  if (gamma > 0) throw params_error("wavelet gamma must be <= 0");
  WaveletIndexSet s;
  s.gamma = gamma;
  long q = P.q_long;
  long kspace = 1;
  for (int i = 0; i < N; ++i) kspace *= q;
  for (long k = 1; k < kspace; ++k) s.k_codes.push_back(k);
  long bspace = 1;
  for (int i = 0; i < N * (-gamma); ++i) bspace *= q;
  for (long b = 0; b < bspace; ++b) s.b_codes.push_back(b);
  return s;
}

Wavelet build_wavelet(ParamsPtr P, int N, int gamma, long b_code, long k_code) {
  if (gamma > 0) throw params_error("gamma must be <= 0");
  if (k_code == 0) throw params_error("k must be nonzero");
  const long q = P->q_long;
  // k digits per coordinate
  std::vector<long> k(N);
  {
    long c = k_code;
    for (int i = 0; i < N; ++i) {
      k[i] = c % q;
      c /= q;
    }
    if (c != 0) throw params_error("k code out of range");
  }
  // b: -gamma digits per coordinate
  std::vector<Padic> bcomp;
  {
    long c = b_code;
    for (int i = 0; i < N; ++i) {
      std::vector<mpz_class> coeffs(P->f, 0);
      for (int d = 0; d < -gamma; ++d) {
        long enc = c % q;
        c /= q;
        FqElem fe = P->fq_decode(enc);
        for (int j = 0; j < P->f; ++j) coeffs[j] += mpz_class(fe.c[j]) * P->p_pow(d);
      }
      bool allz = std::all_of(coeffs.begin(), coeffs.end(),
                              [](const mpz_class& x) { return x == 0; });
      bcomp.push_back(allz ? Padic::zero(P) : Padic::from_unit(P, 0, coeffs, P->precision));
    }
    if (c != 0) throw params_error("b code out of range");
  }
  PadicVector b(std::move(bcomp));
  // xi0 = -p^{gamma-1} k
  std::vector<Padic> xi0c;
  for (int i = 0; i < N; ++i) {
    if (k[i] == 0) {
      xi0c.push_back(Padic::zero(P));
    } else {
      FqElem fe = P->fq_decode(k[i]);
      std::vector<mpz_class> coeffs(P->f);
      for (int j = 0; j < P->f; ++j) coeffs[j] = fe.c[j];
      Padic kk = Padic::from_unit(P, 0, coeffs, P->precision);
      xi0c.push_back((-kk).shift(gamma - 1));
    }
  }
  PadicVector xi0(std::move(xi0c));

  Wavelet w;
  w.gamma = gamma;
  w.b_code = b_code;
  w.k_code = k_code;
  TestFunction hat(P, Window{N, 1 - gamma, 0});
  double amp = std::pow(P->q, double(gamma) * N / 2.0);
  for (long idx = 0; idx < hat.size(); ++idx) {
    PadicVector rep = hat.coset_rep(idx);
    PNorm d = (rep - xi0).norm();
    bool in_coset = d.zero || d.exp <= gamma;
    if (!in_coset) continue;
    // chi(b . xi) on the O^N-coset of rep
    Padic dot = Padic::zero(P);
    for (int i = 0; i < N; ++i) dot = dot + b[i] * rep[i];
    hat.at(idx) = amp * character_eval(dot);
  }
  w.tf = hat.fourier(true);
  return w;
}

GammaSigmaResult gamma_sigma(const ExtendedMap& sigma, const FieldParams& P, int N, int gamma,
                             long k_code, int budget, std::mt19937_64& rng) {
  GammaSigmaResult R;
  ParamsPtr params = sigma.params();
  const long q = P.q_long;
  std::vector<long> k(N);
  {
    long c = k_code;
    for (int i = 0; i < N; ++i) {
      k[i] = c % q;
      c /= q;
    }
  }
  std::vector<Padic> xi0c;
  for (int i = 0; i < N; ++i) {
    if (k[i] == 0) {
      xi0c.push_back(Padic::zero(params));
    } else {
      FqElem fe = P.fq_decode(k[i]);
      std::vector<mpz_class> coeffs(P.f);
      for (int j = 0; j < P.f; ++j) coeffs[j] = fe.c[j];
      xi0c.push_back((-Padic::from_unit(params, 0, coeffs, P.precision)).shift(gamma - 1));
    }
  }
  PadicVector xi0(std::move(xi0c));
  std::optional<long> expo;
  std::string first_desc;
  std::uniform_int_distribution<long> D(0, q - 1);
  for (int s = 0; s <= budget; ++s) {
    // u in O^N with a few digits; xi = xi0 + p^{gamma} u
    std::vector<Padic> ucomp;
    for (int i = 0; i < N; ++i) {
      std::vector<mpz_class> coeffs(P.f, 0);
      if (s > 0) {
        for (int d = 0; d < 4; ++d) {
          FqElem fe = P.fq_decode(D(rng));
          for (int j = 0; j < P.f; ++j) coeffs[j] += mpz_class(fe.c[j]) * P.p_pow(d);
        }
      }
      bool allz = std::all_of(coeffs.begin(), coeffs.end(),
                              [](const mpz_class& x) { return x == 0; });
      ucomp.push_back(allz ? Padic::zero(params)
                           : Padic::from_unit(params, 0, coeffs, P.precision));
    }
    PadicVector xi = xi0 + PadicVector(std::move(ucomp)).shift(gamma);
    PNorm n = sigma.image_norm(xi);
    long e = n.zero ? std::numeric_limits<long>::min() : n.exp;
    if (!expo) {
      expo = e;
      first_desc = xi.to_string();
    } else if (*expo != e) {
      R.well_defined = false;
      std::ostringstream os;
      os << "||sigma xi|| differs: " << first_desc << " vs " << xi.to_string();
      R.witness = os.str();
      return R;
    }
  }
  R.well_defined = true;
  R.gamma_sigma = int(1 - *expo);
  return R;
}

double operator_eigenvalue(OperatorKind kind, const RadialSymbol& sym,
                           const std::vector<int>& gs) {
  if (kind != OperatorKind::HG && gs.size() != 1)
    throw params_error("J/H take a single gamma_sigma");
  double acc = 0;
  for (int g : gs) acc += sym.value_at_norm_exp(1 - g);
  acc /= double(gs.size());
  if (kind == OperatorKind::J) return acc;
  return acc - sym.lambda;
}

EvolutionTrace solve_cauchy(const RadialSymbol& sym, const GroupAction& G,
                            const TestFunction& psi, const std::vector<double>& times,
                            double residual_dt) {
  EvolutionTrace out;
  TestFunction in = psi;
  if (in.window().M < 0) in = in.refined(0, in.window().m);
  TestFunction hat = in.fourier(false);
  auto prof = symbol_profile_group(sym, G, hat);
  auto evolve_hat = [&](double t) {
    TestFunction h = hat;
    for (long i = 0; i < h.size(); ++i) h.at(i) *= std::exp(-t * (prof[i] - sym.lambda));
    return h;
  };
  auto to_x = [&](const TestFunction& h) { return h.fourier(true); };
  for (double t : times) {
    if (t < 0) throw params_error("times must be nonnegative");
    TestFunction ht = evolve_hat(t);
    TestFunction ut = to_x(ht);
    out.times.push_back(t);
    out.masses.push_back(ut.integrate());
    // residual: ||(u(t+dt) - u(t-dt)) / (2dt) + H_G u(t)||_2
    if (t - residual_dt >= 0) {
      TestFunction hplus = evolve_hat(t + residual_dt);
      TestFunction hminus = evolve_hat(t - residual_dt);
      TestFunction hg = ht;
      for (long i = 0; i < hg.size(); ++i) hg.at(i) *= (prof[i] - sym.lambda);
      TestFunction num = hplus;
      num -= hminus;
      num *= cplx(1.0 / (2.0 * residual_dt), 0);
      num += hg;
      out.residuals.push_back(num.norm2());  // Parseval: same as x-side norm
    } else {
      out.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    out.states.push_back(std::move(ut));
  }
  return out;
}

LatticeCheck spectrum_in_lattice(const std::vector<double>& values, double lambda, double base,
                                 double rel_tol) {
  LatticeCheck out;
  for (double v : values) {
    double w = v + lambda;
    bool ok = false;
    if (w > 0) {
      double kf = std::log(w) / std::log(base);
      for (long k = lround(kf) - 1; k <= lround(kf) + 1; ++k) {
        double cand = std::pow(base, double(k));
        if (std::abs(w - cand) <= rel_tol * std::max(cand, w)) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) {
      out.contained = false;
      out.witness = v;
      std::ostringstream os;
      os << "value " << v << " + lambda = " << w << " is not an integral power of " << base;
      out.detail = os.str();
      return out;
    }
  }
  return out;
}

PositivityReport positivity_check(const HeatKernel& Z) {
  PositivityReport R;
  TestFunction k = Z.materialize(0);
  R.tail_bound = Z.tail_bound();
  R.samples = k.size();
  R.min_value = std::numeric_limits<double>::infinity();
  for (long i = 0; i < k.size(); ++i) {
    double v = k.at(i).real();
    R.min_value = std::min(R.min_value, v);
    if (v < -R.tail_bound - 1e-12) ++R.negatives_beyond_tail;
  }
  return R;
}

}  // namespace pspectra
