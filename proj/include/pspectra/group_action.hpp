#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pspectra/padic.hpp"

namespace pspectra {

/// Finite group given by a composition table; axioms checked at construction.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table);

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup from_json(const std::string& text);

  int order() const { return int(names_.size()); }
  int identity() const { return id_; }
  int compose(int a, int b) const { return table_[a][b]; }  // a after b
  int inverse(int a) const { return inv_[a]; }
  const std::string& name(int a) const { return names_[a]; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
  int id_ = 0;
};

/// Finite union of disjoint balls {x : x = center mod p^{scale} O^N}.
struct Ball {
  PadicVector center;
  int scale = 0;
};

class BallUnion {
 public:
  BallUnion() = default;
  explicit BallUnion(std::vector<Ball> balls);
  static BallUnion unit_polydisk(ParamsPtr P, int N);

  bool contains(const PadicVector& x) const;
  const std::vector<Ball>& balls() const { return balls_; }
  bool empty() const { return balls_.empty(); }

 private:
  std::vector<Ball> balls_;
};

/// Evaluable ball-to-ball map of the unit polydisk (or a sub-union X of it).
class CoreMap {
 public:
  virtual ~CoreMap() = default;
  virtual PadicVector eval(const PadicVector& x) const = 0;
  virtual std::string describe() const = 0;
};

class IdentityCore final : public CoreMap {
 public:
  PadicVector eval(const PadicVector& x) const override { return x; }
  std::string describe() const override { return "id"; }
};

/// Piecewise translation permuting cosets of p^{scale} O^N: x in block b_src
/// maps to x - src + dst. Blocks must be disjoint; identity off the listed blocks.
class BlockPermutationCore final : public CoreMap {
 public:
  struct Move {
    PadicVector src, dst;  // exact block representatives
  };
  BlockPermutationCore(std::vector<Move> moves, int scale);
  PadicVector eval(const PadicVector& x) const override;
  std::string describe() const override;

 private:
  std::vector<Move> moves_;
  int scale_;
};

class CoordinatePermutationCore final : public CoreMap {
 public:
  explicit CoordinatePermutationCore(std::vector<int> perm) : perm_(std::move(perm)) {}
  PadicVector eval(const PadicVector& x) const override;
  std::string describe() const override { return "coordinate permutation"; }

 private:
  std::vector<int> perm_;
};

class FunctionCore final : public CoreMap {
 public:
  FunctionCore(std::function<PadicVector(const PadicVector&)> fn, std::string name)
      : fn_(std::move(fn)), name_(std::move(name)) {}
  PadicVector eval(const PadicVector& x) const override { return fn_(x); }
  std::string describe() const override { return name_; }

 private:
  std::function<PadicVector(const PadicVector&)> fn_;
  std::string name_;
};

/**
 * Extension of a core map on X subset of D_K^N to all of K^N:
 *   1. identity on D_K^N \ X,
 *   2. conjugation by the rescaling x -> p^rho x on B_rho(0) \ D_K^N,
 *   3. identity outside B_rho(0).
 */
class ExtendedMap {
 public:
  ExtendedMap() = default;
  ExtendedMap(ParamsPtr P, int N, std::shared_ptr<const CoreMap> core, BallUnion X, int rho);

  static ExtendedMap identity(ParamsPtr P, int N, int rho);

  PadicVector eval(const PadicVector& x) const;
  /// Norm exponent of sigma(x) (the quantity entering f_sigma); norm = base^e.
  PNorm image_norm(const PadicVector& x) const { return eval(x).norm(); }

  int rho() const { return rho_; }
  int dim() const { return N_; }
  const ParamsPtr& params() const { return P_; }
  const CoreMap& core() const { return *core_; }
  bool is_identity_core() const;

 private:
  ParamsPtr P_;
  int N_ = 1;
  std::shared_ptr<const CoreMap> core_;
  BallUnion X_;
  int rho_ = 1;
};

/// A finite group together with one extended map per element; map composition
/// is expected to follow the table (spot-checked by tests, not enforced here).
struct GroupAction {
  FiniteGroup group;
  std::vector<ExtendedMap> maps;

  static GroupAction trivial(ParamsPtr P, int N, int rho);
  /// Symmetric group on the leading-digit blocks {c + pO : c in block_digits}
  /// of the first coordinate, acting inside the unit polydisk.
  static GroupAction block_symmetric(ParamsPtr P, int N, int rho,
                                     const std::vector<long>& block_digits);
};

struct SampledCheck {
  bool consistent = true;
  int samples = 0;
  std::string witness;  // description of the violating pair, if any
};

/// Randomized check that ||sigma x|| = ||sigma y|| implies g(x) = g(y).
SampledCheck check_sigma_radial(const std::function<double(const PadicVector&)>& g,
                                const ExtendedMap& sigma, int budget, std::mt19937_64& rng);
/// Randomized check that ||sigma x|| <= ||sigma y|| implies g(x) <= g(y).
SampledCheck check_sigma_increasing(const std::function<double(const PadicVector&)>& g,
                                    const ExtendedMap& sigma, int budget, std::mt19937_64& rng);

/// Random element with prescribed norm exponent (valuation -e on some coordinate).
PadicVector random_vector_on_shell(ParamsPtr P, int N, int shell_exp, std::mt19937_64& rng);

}  // namespace pspectra
