#include "pspectra/stable_graph.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pspectra {

StableGraph::StableGraph(int num_vertices, std::vector<std::pair<int, int>> edges)
    : V_(num_vertices), E_(std::move(edges)) {
  if (V_ <= 0) throw params_error("graph needs at least one vertex");
  for (auto& [u, v] : E_) {
    if (u < 0 || u >= V_ || v < 0 || v >= V_) throw params_error("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
}

StableGraph StableGraph::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<int> verts = j.at("vertices").get<std::vector<int>>();
  int V = int(verts.size());
  // vertices may carry arbitrary ids; normalize to 0..V-1
  std::map<int, int> remap;
  for (int i = 0; i < V; ++i) remap[verts[i]] = i;
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(remap.at(e.at(0).get<int>()), remap.at(e.at(1).get<int>()));
  return StableGraph(V, std::move(edges));
}

std::string StableGraph::to_json() const {
  nlohmann::ordered_json j;
  auto vs = nlohmann::ordered_json::array();
  for (int v = 0; v < V_; ++v) vs.push_back(v);
  j["vertices"] = vs;
  auto es = nlohmann::ordered_json::array();
  for (const auto& [u, v] : E_) es.push_back({u, v});
  j["edges"] = es;
  return j.dump();
}

bool StableGraph::connected() const {
  std::vector<bool> seen(V_, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const auto& [a, b] : E_) {
      int other = -1;
      if (a == u) other = b;
      else if (b == u) other = a;
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        ++count;
        q.push(other);
      }
    }
  }
  return count == V_;
}

int StableGraph::genus() const {
  if (!connected()) throw params_error("genus requires a connected graph");
  return num_edges() - V_ + 1;
}

int StableGraph::degree(int v) const {
  int d = 0;
  for (const auto& [a, b] : E_) {
    if (a == v) ++d;
    if (b == v) ++d;
  }
  return d;
}

bool StableGraph::is_stable() const {
  if (!connected()) return false;
  if (genus() < 2) return false;
  for (int v = 0; v < V_; ++v)
    if (degree(v) < 3) return false;
  return true;
}

std::vector<int> StableGraph::spanning_tree() const {
  std::vector<bool> seen(V_, false);
  std::vector<int> tree;
  seen[0] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e = 0; e < num_edges(); ++e) {
      auto [u, v] = E_[e];
      if (u == v) continue;
      if (seen[u] != seen[v]) {
        tree.push_back(e);
        seen[u] = seen[v] = true;
        grew = true;
      }
    }
  }
  std::sort(tree.begin(), tree.end());
  if (int(tree.size()) != V_ - 1) throw params_error("graph not connected");
  return tree;
}

std::vector<std::vector<int>> StableGraph::all_spanning_trees(int limit) const {
  std::vector<std::vector<int>> out;
  int need = V_ - 1;
  std::vector<int> pick;
  // union-find over chosen edges
  std::function<void(int)> rec = [&](int next) {
    if (int(pick.size()) == need) {
      std::vector<int> parent(V_);
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (int e : pick) {
        auto [u, v] = E_[e];
        int ru = find(u), rv = find(v);
        if (ru == rv) return;  // cycle
        parent[ru] = rv;
      }
      out.push_back(pick);
      if (int(out.size()) > limit) throw params_error("too many spanning trees");
      return;
    }
    if (next >= num_edges()) return;
    if (num_edges() - next < need - int(pick.size())) return;
    if (!is_loop(next)) {
      pick.push_back(next);
      rec(next + 1);
      pick.pop_back();
    }
    rec(next + 1);
  };
  rec(0);
  return out;
}

bool GraphAutomorphism::is_identity() const {
  for (int i = 0; i < int(dart_perm.size()); ++i)
    if (dart_perm[i] != i) return false;
  return true;
}

bool GraphAutomorphism::is_pure_loop_flip(const StableGraph& g) const {
  for (int v = 0; v < int(vertex_perm.size()); ++v)
    if (vertex_perm[v] != v) return false;
  for (int e = 0; e < int(edge_perm.size()); ++e) {
    if (edge_perm[e] != e) return false;
    if (!g.is_loop(e) && dart_perm[2 * e] != 2 * e) return false;
  }
  return true;
}

namespace {

struct VertexProfile {
  int degree;
  int loops;
  std::vector<int> mult_multiset;  // sorted multiplicities to distinct neighbors
  bool operator==(const VertexProfile& o) const {
    return degree == o.degree && loops == o.loops && mult_multiset == o.mult_multiset;
  }
};

VertexProfile profile_of(const StableGraph& g, int v) {
  VertexProfile p{g.degree(v), 0, {}};
  std::map<int, int> mult;
  for (const auto& [a, b] : g.edges()) {
    if (a == v && b == v) ++p.loops;
    else if (a == v) ++mult[b];
    else if (b == v) ++mult[a];
  }
  for (auto& [w, m] : mult) p.mult_multiset.push_back(m);
  std::sort(p.mult_multiset.begin(), p.mult_multiset.end());
  return p;
}

int pair_multiplicity(const StableGraph& g, int u, int v) {
  int m = 0;
  for (const auto& [a, b] : g.edges())
    if ((a == u && b == v) || (a == v && b == u)) ++m;
  return m;
}

void enumerate_vertex_perms(const StableGraph& g, std::vector<std::vector<int>>& out) {
  int V = g.num_vertices();
  std::vector<VertexProfile> prof;
  for (int v = 0; v < V; ++v) prof.push_back(profile_of(g, v));
  std::vector<int> pi(V, -1);
  std::vector<bool> used(V, false);
  std::function<void(int)> rec = [&](int u) {
    if (u == V) {
      out.push_back(pi);
      return;
    }
    for (int t = 0; t < V; ++t) {
      if (used[t] || !(prof[u] == prof[t])) continue;
      bool ok = true;
      for (int w = 0; w < u && ok; ++w)
        if (pair_multiplicity(g, u, w) != pair_multiplicity(g, t, pi[w])) ok = false;
      if (!ok) continue;
      pi[u] = t;
      used[t] = true;
      rec(u + 1);
      used[t] = false;
      pi[u] = -1;
    }
  };
  rec(0);
}

}  // namespace

AutomorphismGroup automorphism_group(const StableGraph& g, int max_vertices) {
  if (g.num_vertices() > max_vertices) throw params_error("automorphism size guard exceeded");
  AutomorphismGroup out;
  std::vector<std::vector<int>> vperms;
  enumerate_vertex_perms(g, vperms);
  const int E = g.num_edges();
  const int D = 2 * E;
  for (const auto& pi : vperms) {
    // group edges: loops per vertex, parallel classes per unordered pair
    std::map<int, std::vector<int>> loops;
    std::map<std::pair<int, int>, std::vector<int>> classes;
    for (int e = 0; e < E; ++e) {
      auto [u, v] = g.edges()[e];
      if (u == v) loops[u].push_back(e);
      else classes[{u, v}].push_back(e);
    }
    // candidate target lists under pi
    struct ClassMatch {
      std::vector<int> src, dst;
      bool loop;
    };
    std::vector<ClassMatch> matches;
    bool feasible = true;
    for (auto& [v, ls] : loops) {
      auto it = loops.find(pi[v]);
      if (it == loops.end() || it->second.size() != ls.size()) {
        feasible = false;
        break;
      }
      matches.push_back({ls, it->second, true});
    }
    if (!feasible) continue;
    for (auto& [pr, es] : classes) {
      std::pair<int, int> target{std::min(pi[pr.first], pi[pr.second]),
                                 std::max(pi[pr.first], pi[pr.second])};
      auto it = classes.find(target);
      if (it == classes.end() || it->second.size() != es.size()) {
        feasible = false;
        break;
      }
      matches.push_back({es, it->second, false});
    }
    if (!feasible) continue;
    // enumerate bijections per class (and loop orientations)
    std::vector<int> dart_perm(D, -1), edge_perm(E, -1);
    std::function<void(size_t)> rec = [&](size_t mi) {
      if (mi == matches.size()) {
        GraphAutomorphism a;
        a.dart_perm = dart_perm;
        a.vertex_perm = pi;
        a.edge_perm = edge_perm;
        out.elements.push_back(std::move(a));
        if (out.elements.size() > 200000) throw params_error("automorphism group too large");
        return;
      }
      auto& M = matches[mi];
      std::vector<int> perm(M.src.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        // orientation choices for loops: iterate bitmask
        int orient_count = M.loop ? (1 << M.src.size()) : 1;
        for (int mask = 0; mask < orient_count; ++mask) {
          for (size_t i = 0; i < M.src.size(); ++i) {
            int e = M.src[i], e2 = M.dst[perm[i]];
            edge_perm[e] = e2;
            if (M.loop) {
              bool flip = (mask >> i) & 1;
              dart_perm[2 * e] = flip ? 2 * e2 + 1 : 2 * e2;
              dart_perm[2 * e + 1] = flip ? 2 * e2 : 2 * e2 + 1;
            } else {
              auto [u, v] = g.edges()[e];
              auto [u2, v2] = g.edges()[e2];
              // dart 2e runs u -> v; image must run pi[u] -> pi[v]
              if (pi[u] == u2 && pi[v] == v2) {
                dart_perm[2 * e] = 2 * e2;
                dart_perm[2 * e + 1] = 2 * e2 + 1;
              } else {
                dart_perm[2 * e] = 2 * e2 + 1;
                dart_perm[2 * e + 1] = 2 * e2;
              }
            }
          }
          rec(mi + 1);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(0);
  }
  // abstract full group
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < int(out.elements.size()); ++i) index[out.elements[i].dart_perm] = i;
  int n = int(out.elements.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> comp(D);
      for (int d = 0; d < D; ++d) comp[d] = out.elements[a].dart_perm[out.elements[b].dart_perm[d]];
      auto it = index.find(comp);
      if (it == index.end()) throw params_error("automorphism set not closed");
      table[a][b] = it->second;
    }
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
  out.abstract_full = FiniteGroup(names, table);
  // effective quotient: cosets by (vertex_perm, edge_perm)
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> coset_of;
  std::vector<int> elem_coset(n);
  for (int i = 0; i < n; ++i) {
    auto key = std::make_pair(out.elements[i].vertex_perm, out.elements[i].edge_perm);
    auto it = coset_of.find(key);
    if (it == coset_of.end()) {
      int c = int(out.effective_reps.size());
      coset_of[key] = c;
      out.effective_reps.push_back(i);
      elem_coset[i] = c;
    } else {
      elem_coset[i] = it->second;
    }
  }
  int ne = int(out.effective_reps.size());
  std::vector<std::vector<int>> etable(ne, std::vector<int>(ne));
  for (int a = 0; a < ne; ++a)
    for (int b = 0; b < ne; ++b)
      etable[a][b] = elem_coset[table[out.effective_reps[a]][out.effective_reps[b]]];
  std::vector<std::string> enames;
  for (int i = 0; i < ne; ++i) enames.push_back("s" + std::to_string(i));
  out.abstract_effective = FiniteGroup(enames, etable);
  return out;
}

namespace {

// Parent darts of a BFS tree rooted at base, using only the given tree edges.
std::vector<int> tree_parents(const StableGraph& g, const std::vector<int>& tree, int base) {
  std::vector<int> parent_dart(g.num_vertices(), -1);
  std::vector<bool> seen(g.num_vertices(), false);
  seen[base] = true;
  std::queue<int> q;
  q.push(base);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int e : tree) {
      auto [a, b] = g.edges()[e];
      int other = -1, dart = -1;
      if (a == u) {
        other = b;
        dart = 2 * e;  // runs u -> other
      } else if (b == u) {
        other = a;
        dart = 2 * e + 1;
      }
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        parent_dart[other] = dart ^ 1;  // dart other -> u
        q.push(other);
      }
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!seen[v]) throw params_error("tree does not span");
  return parent_dart;
}

// Dart path from u to the root along parent darts.
std::vector<int> path_to_root(const StableGraph& g, const std::vector<int>& parent_dart, int u) {
  std::vector<int> path;
  while (parent_dart[u] != -1) {
    path.push_back(parent_dart[u]);
    u = g.dart_head(parent_dart[u]);
  }
  return path;
}

}  // namespace

GeometricBasis lasso_basis(const StableGraph& g, const std::vector<int>& tree, int base_vertex) {
  GeometricBasis B;
  B.base_vertex = base_vertex;
  B.tree_edges = tree;
  std::set<int> in_tree(tree.begin(), tree.end());
  auto parent = tree_parents(g, tree, base_vertex);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (in_tree.count(e)) continue;
    B.cycle_edges.push_back(e);
    auto [u, v] = g.edges()[e];
    std::vector<int> to_u = path_to_root(g, parent, u);
    std::reverse(to_u.begin(), to_u.end());
    for (auto& d : to_u) d ^= 1;  // now runs base -> u
    std::vector<int> lasso = to_u;
    lasso.push_back(2 * e);  // u -> v
    std::vector<int> back = path_to_root(g, parent, v);
    lasso.insert(lasso.end(), back.begin(), back.end());
    B.lasso_darts.push_back(std::move(lasso));
  }
  return B;
}

std::vector<int> loop_word(const StableGraph&, const GeometricBasis& basis,
                           const std::vector<int>& darts) {
  std::map<int, int> gen_of_edge;
  for (int i = 0; i < int(basis.cycle_edges.size()); ++i)
    gen_of_edge[basis.cycle_edges[i]] = i + 1;
  std::vector<int> word;
  for (int d : darts) {
    int e = d >> 1;
    auto it = gen_of_edge.find(e);
    if (it == gen_of_edge.end()) continue;  // tree dart
    int letter = (d & 1) ? -it->second : it->second;
    if (!word.empty() && word.back() == -letter)
      word.pop_back();
    else
      word.push_back(letter);
  }
  return word;
}

std::string word_to_string(const std::vector<int>& word) {
  if (word.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += "*";
    s += "w" + std::to_string(std::abs(word[i]));
    if (word[i] < 0) s += "^-1";
  }
  return s;
}

OrbitClosureResult basis_orbit_closed(const StableGraph& g, const AutomorphismGroup& aut,
                                      const GeometricBasis& basis) {
  OrbitClosureResult out;
  auto parent = tree_parents(g, basis.tree_edges, basis.base_vertex);
  for (int ai = 0; ai < int(aut.elements.size()); ++ai) {
    const auto& a = aut.elements[ai];
    std::vector<std::vector<int>> images;
    for (int li = 0; li < int(basis.lasso_darts.size()); ++li) {
      std::vector<int> img;
      for (int d : basis.lasso_darts[li]) img.push_back(a.dart_perm[d]);
      // rebase at the base vertex with tree paths
      int newbase = a.vertex_perm[basis.base_vertex];
      std::vector<int> to_nb = path_to_root(g, parent, newbase);
      std::reverse(to_nb.begin(), to_nb.end());
      for (auto& d : to_nb) d ^= 1;  // base -> newbase
      std::vector<int> full = to_nb;
      full.insert(full.end(), img.begin(), img.end());
      std::vector<int> back = path_to_root(g, parent, newbase);
      full.insert(full.end(), back.begin(), back.end());
      std::vector<int> w = loop_word(g, basis, full);
      if (int(w.size()) != 1 && !out.witness) {
        out.closed = false;
        out.witness = OrbitWitness{ai, li, w};
      }
      images.push_back(std::move(w));
    }
    out.images.push_back(std::move(images));
  }
  return out;
}

namespace {

struct SimplePath {
  std::vector<int> edges;
  uint64_t internal_mask = 0;  // internal vertices
};

// All simple u-v paths (internally vertex-distinct, no loops possible).
std::vector<SimplePath> simple_paths(const StableGraph& g, int u, int v) {
  std::vector<SimplePath> out;
  std::vector<int> edges_used;
  std::vector<bool> vert_used(g.num_vertices(), false);
  std::function<void(int, uint64_t)> rec = [&](int at, uint64_t internal) {
    if (at == v && !edges_used.empty()) {
      out.push_back({edges_used, internal & ~((uint64_t(1) << u) | (uint64_t(1) << v))});
      return;
    }
    for (int e = 0; e < g.num_edges(); ++e) {
      auto [a, b] = g.edges()[e];
      if (a == b) continue;  // loops never lie on a simple path between corners
      int other = -1;
      if (a == at) other = b;
      else if (b == at) other = a;
      if (other < 0) continue;
      if (std::find(edges_used.begin(), edges_used.end(), e) != edges_used.end()) continue;
      if (other != v && vert_used[other]) continue;
      if (other == u) continue;
      edges_used.push_back(e);
      bool mark = (other != v);
      if (mark) vert_used[other] = true;
      rec(other, mark ? (internal | (uint64_t(1) << other)) : internal);
      if (mark) vert_used[other] = false;
      edges_used.pop_back();
    }
  };
  vert_used[u] = true;
  rec(u, 0);
  return out;
}

}  // namespace

std::vector<Mouth> find_mouths(const StableGraph& g) {
  std::vector<Mouth> out;
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v = u + 1; v < g.num_vertices(); ++v) {
      auto paths = simple_paths(g, u, v);
      std::map<int, std::vector<int>> by_len;
      for (int i = 0; i < int(paths.size()); ++i) by_len[int(paths[i].edges.size())].push_back(i);
      for (auto& [len, idxs] : by_len) {
        if (len < 1 || int(idxs.size()) < 3) continue;
        bool found = false;
        for (size_t i = 0; i < idxs.size() && !found; ++i)
          for (size_t j = i + 1; j < idxs.size() && !found; ++j) {
            if (paths[idxs[i]].internal_mask & paths[idxs[j]].internal_mask) continue;
            for (size_t k = j + 1; k < idxs.size() && !found; ++k) {
              if (paths[idxs[i]].internal_mask & paths[idxs[k]].internal_mask) continue;
              if (paths[idxs[j]].internal_mask & paths[idxs[k]].internal_mask) continue;
              Mouth m;
              m.corner_u = u;
              m.corner_v = v;
              m.arm_length = len;
              m.arms = {paths[idxs[i]].edges, paths[idxs[j]].edges, paths[idxs[k]].edges};
              out.push_back(std::move(m));
              found = true;
            }
          }
      }
    }
  return out;
}

Classification classify_spectrum(const StableGraph& g, const std::vector<int>& tree) {
  Classification out;
  out.mouths = find_mouths(g);
  std::vector<int> tree_deg(g.num_vertices(), 0);
  for (int e : tree) {
    tree_deg[g.edges()[e].first]++;
    tree_deg[g.edges()[e].second]++;
  }
  std::ostringstream why;
  if (out.mouths.empty()) {
    out.contained = true;
    why << "no mouth: every geometric basis is permuted by Aut, spectrum contained";
    out.explanation = why.str();
    return out;
  }
  for (const auto& m : out.mouths) {
    for (int corner : {m.corner_u, m.corner_v}) {
      bool tip = tree_deg[corner] == 1;
      int dg = g.degree(corner);
      int dt = tree_deg[corner];
      if (tip && dg - dt <= 2) {
        out.contained = false;
        out.witness_mouth = m;
        out.witness_corner = corner;
        why << "mouth at corners (" << m.corner_u << "," << m.corner_v << ") with arm length "
            << m.arm_length << ": corner " << corner << " is a tip of T and deg_G(" << corner
            << ") - deg_T(" << corner << ") = " << dg << " - " << dt << " = " << (dg - dt)
            << " <= 2";
        out.explanation = why.str();
        return out;
      }
    }
  }
  out.contained = true;
  why << "mouths exist but none qualifies:";
  for (const auto& m : out.mouths) {
    for (int corner : {m.corner_u, m.corner_v}) {
      bool tip = tree_deg[corner] == 1;
      int dg = g.degree(corner), dt = tree_deg[corner];
      why << " corner " << corner << " of mouth (" << m.corner_u << "," << m.corner_v << "): ";
      if (!tip) {
        why << "not a tip of T;";
      } else {
        why << "deg_G(" << corner << ") - deg_T(" << corner << ") = " << dg << " - " << dt
            << " = " << (dg - dt) << " > 2;";
      }
    }
  }
  out.explanation = why.str();
  return out;
}

TreeScan classify_all_trees(const StableGraph& g) {
  TreeScan out;
  out.trees = g.all_spanning_trees();
  for (const auto& t : out.trees) out.contained.push_back(classify_spectrum(g, t).contained);
  for (bool c : out.contained)
    if (c != out.contained.front()) out.tree_invariant = false;
  return out;
}

std::vector<std::pair<int, int>> canonical_form(const StableGraph& g) {
  int V = g.num_vertices();
  std::vector<int> perm(V);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<int, int>> best;
  do {
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edges()) {
      int a = perm[u], b = perm[v];
      if (a > b) std::swap(a, b);
      edges.emplace_back(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (best.empty() || edges < best) best = std::move(edges);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<StableGraph> enumerate_stable_graphs(int genus) {
  if (genus < 2) throw params_error("stable graphs require genus >= 2");
  std::vector<StableGraph> out;
  std::set<std::vector<std::pair<int, int>>> seen;
  int maxE = 3 * genus - 3;
  for (int E = genus; E <= maxE; ++E) {
    int V = E - genus + 1;
    if (V < 1) continue;
    // all pairs (a, b) with a <= b
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < V; ++a)
      for (int b = a; b < V; ++b) pairs.emplace_back(a, b);
    std::vector<std::pair<int, int>> edges;
    std::function<void(int)> rec = [&](int next) {
      if (int(edges.size()) == E) {
        StableGraph g(V, edges);
        if (!g.connected() || !g.is_stable()) return;
        auto canon = canonical_form(g);
        if (seen.insert(canon).second) out.emplace_back(V, canon);
        return;
      }
      if (next >= int(pairs.size())) return;
      // multiset: allow repeats of the current pair
      rec(next + 1);
      edges.push_back(pairs[next]);
      rec(next);
      edges.pop_back();
    };
    rec(0);
  }
  std::sort(out.begin(), out.end(), [](const StableGraph& a, const StableGraph& b) {
    if (a.num_vertices() != b.num_vertices()) return a.num_vertices() < b.num_vertices();
    return a.edges() < b.edges();
  });
  return out;
}

StableGraph dumbbell_graph() { return StableGraph(2, {{0, 0}, {0, 1}, {1, 1}}); }
StableGraph rose_graph() { return StableGraph(1, {{0, 0}, {0, 0}}); }
StableGraph theta_graph() { return StableGraph(2, {{0, 1}, {0, 1}, {0, 1}}); }
StableGraph example_graph() {
  return StableGraph(2, {{0, 1}, {0, 1}, {0, 1}, {0, 0}, {1, 1}});
}

}  // namespace pspectra
