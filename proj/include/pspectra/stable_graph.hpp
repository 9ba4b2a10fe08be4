#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pspectra/group_action.hpp"

namespace pspectra {

/**
 * Finite connected multigraph with loops. Edges are unordered endpoint pairs;
 * darts 2e and 2e+1 are the two orientations of edge e (dart 2e runs u -> v).
 * Stability: every vertex has degree >= 3 with loops counted twice.
 */
class StableGraph {
 public:
  StableGraph() = default;
  StableGraph(int num_vertices, std::vector<std::pair<int, int>> edges);

  static StableGraph from_json(const std::string& text);
  std::string to_json() const;

  int num_vertices() const { return V_; }
  int num_edges() const { return int(E_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return E_; }
  bool is_loop(int e) const { return E_[e].first == E_[e].second; }

  int dart_tail(int d) const { return (d & 1) ? E_[d >> 1].second : E_[d >> 1].first; }
  int dart_head(int d) const { return (d & 1) ? E_[d >> 1].first : E_[d >> 1].second; }

  bool connected() const;
  int genus() const;  // first Betti number |E| - |V| + 1
  int degree(int v) const;  // loop counts twice
  bool is_stable() const;

  /// Canonical spanning tree (BFS from vertex 0, smallest edge index first).
  std::vector<int> spanning_tree() const;
  std::vector<std::vector<int>> all_spanning_trees(int limit = 4096) const;

 private:
  int V_ = 0;
  std::vector<std::pair<int, int>> E_;
};

/// Dart-level automorphism: permutation of darts commuting with reversal and
/// inducing a vertex permutation. Captures loop flips faithfully.
struct GraphAutomorphism {
  std::vector<int> dart_perm;
  std::vector<int> vertex_perm;
  std::vector<int> edge_perm;

  bool is_identity() const;
  /// Identity on vertices and edges; only loop orientations may flip.
  bool is_pure_loop_flip(const StableGraph& g) const;
};

struct AutomorphismGroup {
  std::vector<GraphAutomorphism> elements;  // full dart-level group
  FiniteGroup abstract_full;
  /// Quotient by pure loop flips (the action classification consumes):
  /// one representative per coset.
  std::vector<int> effective_reps;
  FiniteGroup abstract_effective;
};

/// Exhaustive dart-level automorphism search with degree pruning.
AutomorphismGroup automorphism_group(const StableGraph& g, int max_vertices = 12);

/**
 * Geometric basis of lasso loops: for spanning tree T and base vertex P, one
 * loop per non-tree edge (tree path out, the edge, tree path back). Loop words
 * in the free group are sequences of signed generator indices (+i / -i, 1-based).
 */
struct GeometricBasis {
  int base_vertex = 0;
  std::vector<int> tree_edges;
  std::vector<int> cycle_edges;               // non-tree edges, one generator each
  std::vector<std::vector<int>> lasso_darts;  // dart sequences of the lassos
};

GeometricBasis lasso_basis(const StableGraph& g, const std::vector<int>& tree, int base_vertex);

/// Reduced word of a closed dart walk in the free group on the basis generators.
std::vector<int> loop_word(const StableGraph& g, const GeometricBasis& basis,
                           const std::vector<int>& darts);

std::string word_to_string(const std::vector<int>& word);

struct OrbitWitness {
  int automorphism = -1;
  int generator = -1;
  std::vector<int> image_word;
};

struct OrbitClosureResult {
  bool closed = true;
  std::vector<std::vector<std::vector<int>>> images;  // [aut][generator] -> reduced word
  std::optional<OrbitWitness> witness;
};

/// Whether every automorphism maps each lasso class to W^{+-} (a single signed
/// generator), after rebasing the image loop at the base vertex.
OrbitClosureResult basis_orbit_closed(const StableGraph& g, const AutomorphismGroup& aut,
                                      const GeometricBasis& basis);

/// Mouth: two distinct corners joined by three internally vertex-disjoint
/// simple paths of equal positive length.
struct Mouth {
  int corner_u = 0, corner_v = 0;
  int arm_length = 0;
  std::array<std::vector<int>, 3> arms;  // edge sequences
};

std::vector<Mouth> find_mouths(const StableGraph& g);

struct Classification {
  bool contained = true;  // Spec H in base^Z - lambda
  std::string explanation;
  std::vector<Mouth> mouths;
  std::optional<Mouth> witness_mouth;
  int witness_corner = -1;
};

/**
 * Main decision: NotContained iff some mouth has a corner v that is a leaf
 * ("tip") of T with deg_G(v) - deg_T(v) <= 2, degrees loop-doubled.
 */
Classification classify_spectrum(const StableGraph& g, const std::vector<int>& tree);

struct TreeScan {
  std::vector<std::vector<int>> trees;
  std::vector<bool> contained;
  bool tree_invariant = true;
};
TreeScan classify_all_trees(const StableGraph& g);

/// All isomorphism classes of stable graphs of the given genus (|E| <= 3g-3).
std::vector<StableGraph> enumerate_stable_graphs(int genus);

/// Canonical form for isomorphism dedup (lexicographically minimal edge list
/// over all vertex permutations).
std::vector<std::pair<int, int>> canonical_form(const StableGraph& g);

// The paper's named graphs.
StableGraph dumbbell_graph();    // two vertices, loop at each, one bridge (Fig 1a)
StableGraph rose_graph();        // one vertex, two loops (Fig 1b)
StableGraph theta_graph();       // two vertices, three parallel edges (Fig 1c)
StableGraph example_graph();     // three parallel edges plus a loop at each endpoint

}  // namespace pspectra
