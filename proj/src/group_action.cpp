#include "pspectra/group_action.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace pspectra {

FiniteGroup::FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table)
    : names_(std::move(names)), table_(std::move(table)) {
  int n = int(names_.size());
  if (int(table_.size()) != n) throw params_error("composition table size mismatch");
  for (auto& row : table_) {
    if (int(row.size()) != n) throw params_error("composition table row size mismatch");
    for (int v : row)
      if (v < 0 || v >= n) throw params_error("composition table entry out of range");
  }
  // identity
  id_ = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n; ++a)
      if (table_[e][a] != a || table_[a][e] != a) {
        ok = false;
        break;
      }
    if (ok) {
      id_ = e;
      break;
    }
  }
  if (id_ < 0) throw params_error("no identity element");
  // inverses
  inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == id_ && table_[b][a] == id_) {
        inv_[a] = b;
        break;
      }
    if (inv_[a] < 0) throw params_error("missing inverse");
  }
  // associativity
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw params_error("composition table not associative");
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup({"id"}, {{0}}); }

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back("r" + std::to_string(i));
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  }
  return FiniteGroup(std::move(names), std::move(t));
}

FiniteGroup FiniteGroup::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<std::string> names;
  for (const auto& e : j.at("elements")) names.push_back(e.get<std::string>());
  std::vector<std::vector<int>> table;
  for (const auto& row : j.at("table")) table.push_back(row.get<std::vector<int>>());
  return FiniteGroup(std::move(names), std::move(table));
}

BallUnion::BallUnion(std::vector<Ball> balls) : balls_(std::move(balls)) {
  for (size_t i = 0; i < balls_.size(); ++i)
    for (size_t j = i + 1; j < balls_.size(); ++j) {
      // disjoint iff centers differ at the coarser scale
      const Ball &a = balls_[i], &b = balls_[j];
      int s = std::min(a.scale, b.scale);
      PNorm d = (a.center - b.center).norm();
      bool overlap = d.zero || d.exp <= -s;
      if (overlap) throw params_error("balls in union are not disjoint");
    }
}

BallUnion BallUnion::unit_polydisk(ParamsPtr P, int N) {
  return BallUnion({Ball{PadicVector::zero(std::move(P), N), 0}});
}

bool BallUnion::contains(const PadicVector& x) const {
  for (const auto& b : balls_) {
    PNorm d = (x - b.center).norm();
    if (d.zero || d.exp <= -b.scale) return true;
  }
  return false;
}

BlockPermutationCore::BlockPermutationCore(std::vector<Move> moves, int scale)
    : moves_(std::move(moves)), scale_(scale) {
  if (scale_ < 1) throw params_error("block scale must be >= 1");
}

PadicVector BlockPermutationCore::eval(const PadicVector& x) const {
  for (const auto& mv : moves_) {
    PNorm d = (x - mv.src).norm();
    if (d.zero || d.exp <= -scale_) return x - mv.src + mv.dst;
  }
  return x;
}

std::string BlockPermutationCore::describe() const {
  std::ostringstream os;
  os << "block permutation at scale " << scale_ << " (" << moves_.size() << " moves)";
  return os.str();
}

PadicVector CoordinatePermutationCore::eval(const PadicVector& x) const {
  std::vector<Padic> c;
  c.reserve(perm_.size());
  for (int i = 0; i < int(perm_.size()); ++i) c.push_back(x[perm_[i]]);
  return PadicVector(std::move(c));
}

ExtendedMap::ExtendedMap(ParamsPtr P, int N, std::shared_ptr<const CoreMap> core, BallUnion X,
                         int rho)
    : P_(std::move(P)), N_(N), core_(std::move(core)), X_(std::move(X)), rho_(rho) {
  if (rho_ < 1) throw params_error("rho must be >= 1");
}

ExtendedMap ExtendedMap::identity(ParamsPtr P, int N, int rho) {
  auto X = BallUnion::unit_polydisk(P, N);
  return ExtendedMap(P, N, std::make_shared<IdentityCore>(), std::move(X), rho);
}

bool ExtendedMap::is_identity_core() const {
  return dynamic_cast<const IdentityCore*>(core_.get()) != nullptr;
}

PadicVector ExtendedMap::eval(const PadicVector& x) const {
  PNorm n = x.norm();
  if (!n.zero && n.exp > rho_) return x;  // step 3
  if (n.zero || n.exp <= 0) {
    // step 1: inside the unit polydisk
    if (!X_.contains(x)) return x;
    PadicVector y = core_->eval(x);
    PNorm ny = y.norm();
    if (!ny.zero && ny.exp > 0) throw params_error("core map escapes the unit polydisk");
    return y;
  }
  // step 2: conjugate by the rescaling s_rho(x) = p^rho x
  PadicVector scaled = x.shift(rho_);
  PadicVector inner = X_.contains(scaled) ? core_->eval(scaled) : scaled;
  return inner.shift(-rho_);
}

GroupAction GroupAction::trivial(ParamsPtr P, int N, int rho) {
  GroupAction g;
  g.group = FiniteGroup::trivial();
  g.maps.push_back(ExtendedMap::identity(std::move(P), N, rho));
  return g;
}

GroupAction GroupAction::block_symmetric(ParamsPtr P, int N, int rho,
                                         const std::vector<long>& block_digits) {
  int k = int(block_digits.size());
  // enumerate all permutations of the k blocks
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  auto perm_name = [&](const std::vector<int>& p) {
    std::string s = "(";
    for (int i = 0; i < k; ++i) s += std::to_string(p[i]) + (i + 1 < k ? " " : ")");
    return s;
  };
  int n = int(perms.size());
  std::map<std::vector<int>, int> lookup;
  for (int i = 0; i < n; ++i) lookup[perms[i]] = i;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      std::vector<int> c(k);
      for (int i = 0; i < k; ++i) c[i] = perms[a][perms[b][i]];
      table[a][b] = lookup.at(c);
    }
  std::vector<std::string> names;
  for (const auto& pm : perms) names.push_back(perm_name(pm));
  GroupAction g;
  g.group = FiniteGroup(std::move(names), std::move(table));
  auto X = BallUnion::unit_polydisk(P, N);
  for (const auto& pm : perms) {
    std::vector<BlockPermutationCore::Move> moves;
    for (int i = 0; i < k; ++i) {
      if (pm[i] == i) continue;
      PadicVector src = PadicVector::zero(P, N), dst = PadicVector::zero(P, N);
      src[0] = Padic::from_long(P, block_digits[i]);
      dst[0] = Padic::from_long(P, block_digits[pm[i]]);
      moves.push_back({std::move(src), std::move(dst)});
    }
    std::shared_ptr<const CoreMap> core;
    if (moves.empty())
      core = std::make_shared<IdentityCore>();
    else
      core = std::make_shared<BlockPermutationCore>(std::move(moves), 1);
    g.maps.emplace_back(P, N, std::move(core), X, rho);
  }
  return g;
}

PadicVector random_vector_on_shell(ParamsPtr P, int N, int shell_exp, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> D(0, P->q_long - 1);
  std::uniform_int_distribution<int> extra(0, 3);
  std::vector<Padic> comps;
  int lead = int(rng() % N);  // coordinate realizing the norm
  for (int i = 0; i < N; ++i) {
    int v = -shell_exp + (i == lead ? 0 : extra(rng));
    // random unit with a handful of significant digits
    std::vector<mpz_class> coeffs(P->f, 0);
    bool unit = false;
    for (int d = 0; d < 6; ++d) {
      long enc = D(rng);
      if (d == 0 && enc == 0) enc = 1 + (long)(rng() % (P->q_long - 1));
      FqElem fe = P->fq_decode(enc);
      for (int j = 0; j < P->f; ++j) coeffs[j] += mpz_class(fe.c[j]) * P->p_pow(d);
      if (d == 0) unit = true;
    }
    (void)unit;
    comps.push_back(Padic::from_unit(P, v, std::move(coeffs), P->precision));
  }
  return PadicVector(std::move(comps));
}

namespace {

SampledCheck sampled_pair_check(const std::function<double(const PadicVector&)>& g,
                                const ExtendedMap& sigma, int budget, std::mt19937_64& rng,
                                bool increasing) {
  SampledCheck out;
  ParamsPtr P = sigma.params();
  int N = sigma.dim();
  std::vector<std::pair<PNorm, PadicVector>> pts;
  std::uniform_int_distribution<int> shell(-3, sigma.rho() + 2);
  for (int i = 0; i < budget; ++i) {
    PadicVector x = random_vector_on_shell(P, N, shell(rng), rng);
    pts.emplace_back(sigma.image_norm(x), std::move(x));
  }
  out.samples = budget;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const auto& [na, xa] = pts[i];
      const auto& [nb, xb] = pts[j];
      double ga = g(xa), gb = g(xb);
      bool bad = false;
      if (!increasing) {
        if (na == nb && std::abs(ga - gb) > 1e-12) bad = true;
      } else {
        if ((na < nb || na == nb) && ga > gb + 1e-12) bad = true;
      }
      if (bad) {
        out.consistent = false;
        std::ostringstream os;
        os << "x=" << xa.to_string() << " y=" << xb.to_string() << " g(x)=" << ga
           << " g(y)=" << gb;
        out.witness = os.str();
        return out;
      }
    }
  return out;
}

}  // namespace

SampledCheck check_sigma_radial(const std::function<double(const PadicVector&)>& g,
                                const ExtendedMap& sigma, int budget, std::mt19937_64& rng) {
  return sampled_pair_check(g, sigma, budget, rng, false);
}

SampledCheck check_sigma_increasing(const std::function<double(const PadicVector&)>& g,
                                    const ExtendedMap& sigma, int budget, std::mt19937_64& rng) {
  return sampled_pair_check(g, sigma, budget, rng, true);
}

}  // namespace pspectra
