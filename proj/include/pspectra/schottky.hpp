#pragma once

#include <optional>
#include <variant>

#include "pspectra/moebius.hpp"
#include "pspectra/stable_graph.hpp"

namespace pspectra {

/**
 * Gerritzen normal-form coordinates (0,1,t1; inf,y2,t2; x3,y3,t3; ...):
 * generator i has attracting fixed point x_i, repelling y_i, multiplier t_i,
 * with the first two generators pinned to (0, 1) and (inf, y2).
 * Constraints: 0 < |t_i| < 1 and y2, x_i, y_i in the unit disk.
 */
struct SchottkyTuple {
  Padic t1, y2, t2;
  std::vector<std::array<Padic, 3>> higher;  // (x_i, y_i, t_i) for i = 3..g

  int genus() const { return 2 + int(higher.size()); }
  /// Coordinate vector (t1, y2, t2, x3, y3, t3, ...) of length 3g-3.
  PadicVector coords() const;
  void validate() const;
};

/// The two matrices realizing w1, w2 for a genus-2 tuple.
struct GeneratorMatrices {
  std::vector<MoebiusMap> w;
};

GeneratorMatrices generators_genus2(const SchottkyTuple& x);
/// General construction from fixed points and multipliers (any genus).
GeneratorMatrices generators_general(const SchottkyTuple& x);

/// w = w2^{-1} w1 as a literal matrix product.
MoebiusMap composite_w(const SchottkyTuple& x);
/// The matrix entries for w displayed as functions of (t1, y2, t2):
/// [[y2(1-t1)(1-t2) - t1 t2, y2(t2-1)], [1-t1, -1]].
MoebiusMap composite_w_displayed(const SchottkyTuple& x);

/// Matrix of a free-group word in the generators (letters +-i, 1-based).
MoebiusMap word_matrix(const GeneratorMatrices& gens, const std::vector<int>& word);

/// Which fixed point of the composite goes to which slot during renormalization.
enum class RootOrder { Canonical, Swapped };

struct SigmaActionResult {
  enum class Status { Ok, NoRoot, Parabolic } status = Status::NoRoot;
  Padic z1, z2;  // fixed points of w (ordering per RootOrder)
  Padic eta;     // beta(0) = z1(z2-1) / (z2(z1-1))
  SchottkyTuple image;  // (0,1,t1; inf,eta,t1*t2)
  MoebiusMap beta;
};

/**
 * The explicit action on (0,1,t1; inf,-1,t2): fixed points of w = w2^{-1} w1
 * from the quadratic, the normalizing map
 * beta(z) = ((z2-1)z + z1(1-z2)) / ((z1-1)z + z2(1-z1)), eta = beta(0),
 * image tuple (0,1,t1; inf,eta,t1 t2).
 */
SigmaActionResult sigma_action_genus2(const SchottkyTuple& x,
                                      RootOrder order = RootOrder::Canonical);

/// Solution of the linear system  z1 z2 t1 - t2 = z1 z2 - 1,
/// (z1+z2-1) t1 - t2 = z1+z2;  a line when z1 z2 = z1 + z2 - 1.
struct TSolution {
  bool is_line = false;
  Padic t1, t2;               // unique solution
  Padic base1, dir1;          // line: t1 = base1 + s dir1, t2 = s
  std::pair<Padic, Padic> at(const Padic& s) const;
};

TSolution solve_t_from_roots(const Padic& z1, const Padic& z2);

struct EpsilonFamilyRow {
  bool no_root = false;
  std::string p_str, eps_str, s_str;
  Padic z1, z2, t1, t2, eta, eta_swapped;
  PNorm abs_z1, abs_z2, abs_z1m1, abs_z2m1, abs_t1, abs_t2, abs_eta, abs_eta_swapped;
  PNorm critical_residual;  // |z1 z2 - (z1+z2) + 1|
  PNorm lineq_residual;     // |z1 z2 t1 - t2 - (z1 z2 - 1)|
};

/**
 * One row of the epsilon-family report: roots of z^2 - eps z + (1+eps) = 0,
 * (t1, t2) from the on-curve line with parameter s, eta from the beta formula
 * (both root orderings). Measured quantities only; nothing asserted.
 */
EpsilonFamilyRow epsilon_family(const Padic& eps, const Padic& s);

/// Eigenvalue comparison: the shell values f~ at ||p^rho x|| and ||p^rho sigma(x)||.
struct EigenComparison {
  long exp_id = 0, exp_sigma = 0;  // norm exponents of the rescaled coordinates
  double lambda_id = 0, lambda_sigma = 0;
  bool decreased() const { return exp_sigma < exp_id; }
};

EigenComparison compare_eigenvalues(const PadicVector& coords, const PadicVector& image_coords,
                                    int rho, double base, double alpha = 1.0);

struct SearchRow {
  std::string tuple_desc;
  std::string sigma_name;
  std::vector<std::string> image_words;
  RootOrder order = RootOrder::Canonical;
  bool no_root = false;
  bool not_hyperbolic = false;
  bool valid_tuple = false;  // image coordinates inside the polydisk
  long norm_exp_x = 0, norm_exp_image = 0;
  bool witness = false;
  std::string image_desc;
};

struct SearchOutcome {
  bool found = false;
  std::optional<SearchRow> best;  // first witness in deterministic grid order
  std::vector<SearchRow> rows;
  std::string summary;
};

struct SearchGrid {
  std::vector<int> valuations = {1, 2};
  bool all_digits = true;  // leading digits 1..p-1
};

/**
 * Norm-decreasing point hunt for a genus-2 graph: every basis-breaking
 * automorphism acts through its word images (matrix products, fixed points,
 * multipliers, renormalization to tuple form); both root orderings are
 * evaluated and recorded. y2 = -1 throughout.
 */
SearchOutcome search_norm_decreasing(const StableGraph& g, const std::vector<int>& tree,
                                     ParamsPtr P, const SearchGrid& grid);

struct BetaNormRow {
  std::string t1_str, t2_str;
  bool no_root = false;
  PNorm factor_canonical, factor_swapped;  // |z1/z2| * |(1-z2)/(1-z1)|
};

/// The theorem-proof quantity |beta(xi)| = |z1/z2| |(1-z2)/(1-z1)| on a grid;
/// used together with the mouth/degree condition for genus >= 3 graphs.
std::vector<BetaNormRow> beta_norm_report(ParamsPtr P, const SearchGrid& grid);

struct HigherGenusSearch {
  bool qualifying_mouth = false;
  bool factor_below_one = false;
  bool found = false;
  std::vector<BetaNormRow> rows;
  std::string summary;
};

HigherGenusSearch search_higher_genus(const StableGraph& g, const std::vector<int>& tree,
                                      ParamsPtr P, const SearchGrid& grid);

}  // namespace pspectra
