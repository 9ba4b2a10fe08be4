#pragma once

#include <optional>

#include "pspectra/group_action.hpp"
#include "pspectra/test_function.hpp"

namespace pspectra {

/**
 * Radial symbol f: value lambda on the unit polydisk, nondecreasing shell rule
 * f~(e) at norm exponent e >= 1, with a power-law growth certificate
 * A1 base^{g1 e} <= f~(e) <= A2 base^{g2 e} used for certified truncation tails.
 * Default rule: f~(e) = base^{alpha e}.
 */
class RadialSymbol {
 public:
  double lambda = 1.0;
  double alpha = 1.0;
  double A1 = 1.0, A2 = 1.0, gamma1 = 1.0, gamma2 = 1.0;
  std::function<double(int)> custom;  // optional override of the shell rule

  static RadialSymbol power_law(const FieldParams& P, double lambda, double alpha = 1.0);

  double shell_value(int e) const;          // f~ at norm exponent e
  double value_at_norm_exp(int e) const { return e <= 0 ? lambda : shell_value(e); }
  void validate(const FieldParams& P) const;

  double base = 0;  // norm base value, fixed from params at construction
};

/// Certified bound on sum_{nu > nu_max} q^{nu N} exp(-t (f~(nu) - lambda)).
double kernel_tail_bound(const RadialSymbol& sym, const FieldParams& P, int N, double t,
                         int nu_max);
/// Smallest cutoff with tail <= tol (capped at nu_cap).
int effective_cutoff(const RadialSymbol& sym, const FieldParams& P, int N, double t, double tol,
                     int nu_cap);

/// f_sigma values per coset of a Fourier-side window (constant per coset).
std::vector<double> symbol_profile(const RadialSymbol& sym, const ExtendedMap& sigma,
                                   const TestFunction& fourier_window_holder);
/// Group-averaged profile f_G = (1/|G|) sum_sigma f_sigma.
std::vector<double> symbol_profile_group(const RadialSymbol& sym, const GroupAction& G,
                                         const TestFunction& fourier_window_holder);

/**
 * Twisted / invariant heat kernel. Fourier side: exp(-t (f_sigma - lambda)),
 * or exp(-t (f_G - lambda)) with f_G the averaged symbol (the semigroup of H_G).
 * The literal group-kernel (1/|G| times the convolution of all Z_sigma at time t)
 * is available separately for comparison.
 */
class HeatKernel {
 public:
  HeatKernel(RadialSymbol sym, GroupAction action, double t, int nu_max, double tol);

  /// Materialize on the window with given support exponent (>= 0 shows the
  /// vanishing outside the unit polydisk explicitly).
  TestFunction materialize(int support_exp = 0) const;
  double eval(const PadicVector& x) const;
  double tail_bound() const { return tail_; }
  double time() const { return t_; }
  int cutoff() const { return nu_eff_; }
  const RadialSymbol& symbol() const { return sym_; }
  const GroupAction& action() const { return act_; }

  /// Closed-form radial evaluation for the identity action (independent route).
  static double eval_radial_closed_form(const RadialSymbol& sym, const FieldParams& P, int N,
                                        double t, int x_shell_exp, int nu_max);

  /// 1/|G| times the iterated convolution of the Z_sigma at time t (the
  /// paper-literal composite; mass 1/|G| rather than 1).
  TestFunction literal_group_kernel(int support_exp = 0) const;

 private:
  RadialSymbol sym_;
  GroupAction act_;
  double t_;
  int nu_max_;
  int nu_eff_;
  double tail_;
  mutable std::optional<TestFunction> cache_;
};

enum class OperatorKind { J, H, HG };

/**
 * Fourier-multiplier operator: J_sigma = F^{-1} f_sigma F, H_sigma = J_sigma - lambda,
 * H_G = (1/|G|) sum H_sigma. sigma_index selects the group element for J/H.
 */
TestFunction apply_multiplier(OperatorKind kind, const RadialSymbol& sym, const GroupAction& G,
                              int sigma_index, const TestFunction& psi);

/// Kozyrev-type wavelet: mean-zero unit-norm eigenfunction supported in O_K^N,
/// whose Fourier transform is the modulated normalized indicator of the coset
/// p^{gamma}(-p^{-1}k + O^N).
struct Wavelet {
  int gamma = 0;      // <= 0
  long b_code = 0;    // translation b in O^N / p^{-gamma}O^N, base-q digit code
  long k_code = 1;    // k in R^N \ {0}, base-q code per coordinate
  TestFunction tf;
};

struct WaveletIndexSet {
  int gamma;
  std::vector<long> b_codes;
  std::vector<long> k_codes;
};
WaveletIndexSet wavelet_indices(const FieldParams& P, int N, int gamma);

Wavelet build_wavelet(ParamsPtr P, int N, int gamma, long b_code, long k_code);

struct GammaSigmaResult {
  bool well_defined = false;
  int gamma_sigma = 0;  // ||sigma xi|| = base^{1 - gamma_sigma} on the support coset
  std::string witness;  // two points with different image norms, when not constant
};

/// Norm exponent of sigma on the Fourier-support coset of the (gamma, k) wavelet,
/// sampled at `budget` random points plus the canonical center.
GammaSigmaResult gamma_sigma(const ExtendedMap& sigma, const FieldParams& P, int N, int gamma,
                             long k_code, int budget, std::mt19937_64& rng);

/// Eigenvalue of J/H/H_G on a wavelet with the given per-element gamma_sigma data.
double operator_eigenvalue(OperatorKind kind, const RadialSymbol& sym,
                           const std::vector<int>& gamma_sigma_per_element);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<TestFunction> states;
  std::vector<double> residuals;  // central-difference PDE residual per interior time
  std::vector<cplx> masses;
};

/// u(., t) = Z_G(., t) * psi computed on the Fourier side; residuals use
/// r(t) = || (u(t+dt) - u(t-dt)) / 2dt + H_G u(t) ||_2 with the given dt.
EvolutionTrace solve_cauchy(const RadialSymbol& sym, const GroupAction& G,
                            const TestFunction& psi, const std::vector<double>& times,
                            double residual_dt);

struct LatticeCheck {
  bool contained = true;
  double witness = 0;  // first value v with v + lambda not a power of the base
  std::string detail;
};

/// Checks that every value + lambda is an integral power of the norm base.
LatticeCheck spectrum_in_lattice(const std::vector<double>& values, double lambda, double base,
                                 double rel_tol = 1e-9);

struct PositivityReport {
  double min_value = 0;
  double tail_bound = 0;
  long negatives_beyond_tail = 0;
  long samples = 0;
};

PositivityReport positivity_check(const HeatKernel& Z);

}  // namespace pspectra
