#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pspectra/padic.hpp"

namespace pspectra {

using cplx = std::complex<double>;

/**
 * Coset lattice carrying a locally constant function on K^N:
 * support inside p^{-M} O^N, constant on cosets of p^{m} O^N.
 * The window holds q^{(M+m)N} cosets; the Fourier transform of a function
 * on (M, m) lives on (m, M).
 */
struct Window {
  int N = 1;
  int M = 0;
  int m = 0;

  bool operator==(const Window& o) const { return N == o.N && M == o.M && m == o.m; }
  Window dual() const { return Window{N, m, M}; }
  int span() const { return M + m; }
};

/// Standard additive character chi(x) = exp(2 pi i frac_p(Tr x)); chi = 1 on O_K.
cplx character_eval(const Padic& x);

/**
 * Complex-valued locally constant function with compact support, stored as
 * amplitudes on the canonical coset representatives of a Window. Axis layout:
 * one axis per (coordinate, theta-coefficient) pair, each of size P = p^{M+m};
 * a representative's coordinate i equals p^{-M} * sum_j C_{i,j} theta^j.
 */
class TestFunction {
 public:
  TestFunction() = default;
  TestFunction(ParamsPtr P, Window w);

  static TestFunction indicator_unit_ball(ParamsPtr P, int N);
  /// Indicator of the coset center + p^{scale} O^N (center must be exact).
  static TestFunction indicator_coset(const PadicVector& center, int scale);
  static TestFunction random(ParamsPtr P, Window w, std::mt19937_64& rng);

  const ParamsPtr& params() const { return P_; }
  const Window& window() const { return w_; }
  long size() const { return long(a_.size()); }
  const std::vector<cplx>& amplitudes() const { return a_; }
  std::vector<cplx>& amplitudes() { return a_; }

  cplx& at(long flat) { return a_[flat]; }
  const cplx& at(long flat) const { return a_[flat]; }

  PadicVector coset_rep(long flat) const;
  /// Shell exponent e of the representative (norm = base^e), INT_MIN for the zero coset.
  int rep_shell_exp(long flat) const;
  /// Evaluate at an exact point (0 outside support; throws if x is too coarse).
  cplx eval(const PadicVector& x) const;
  /// Flat index of the coset containing x, or -1 if outside the support window.
  long coset_index(const PadicVector& x) const;

  cplx integrate() const;            // Haar integral, unit ball has measure 1
  double coset_measure() const;      // q^{-mN}
  cplx inner(const TestFunction& o) const;  // integral of this * conj(o)
  double norm2() const;
  double sup_norm() const;

  TestFunction fourier(bool inverse = false) const;
  TestFunction convolve(const TestFunction& o) const;
  /// Direct double-sum convolution; small windows only (independent oracle).
  TestFunction convolve_direct(const TestFunction& o) const;

  TestFunction refined(int M2, int m2) const;  // requires M2 >= M, m2 >= m
  /// Shrink to (M2, m2); throws if truncated mass or constancy defect exceeds eps.
  TestFunction restricted(int M2, int m2, double eps) const;
  static void to_common_window(TestFunction& a, TestFunction& b);

  TestFunction& operator*=(cplx s);
  TestFunction& operator+=(const TestFunction& o);
  TestFunction& operator-=(const TestFunction& o);
  /// Pointwise product with a real profile given per coset.
  TestFunction multiplied(const std::vector<double>& profile) const;

  std::string to_json() const;
  static TestFunction from_json(const std::string& text);

 private:
  ParamsPtr P_;
  Window w_;
  long P_pow_ = 1;  // p^{M+m}
  std::vector<cplx> a_;

  void init_sizes();
};

}  // namespace pspectra
