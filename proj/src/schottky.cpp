#include "pspectra/schottky.hpp"

#include <algorithm>
#include <sstream>

namespace pspectra {

namespace {

Padic one_of(const ParamsPtr& P) { return Padic::from_long(P, 1); }

bool in_unit_disk(const Padic& x) {
  return x.is_zero() || x.valuation() >= 0;
}

bool in_punctured_disk(const Padic& x) {
  return !x.is_zero() && x.valuation() >= 1;
}

}  // namespace

PadicVector SchottkyTuple::coords() const {
  std::vector<Padic> c = {t1, y2, t2};
  for (const auto& h : higher) {
    c.push_back(h[0]);
    c.push_back(h[1]);
    c.push_back(h[2]);
  }
  return PadicVector(std::move(c));
}

void SchottkyTuple::validate() const {
  if (!in_punctured_disk(t1) || !in_punctured_disk(t2))
    throw params_error("multipliers must satisfy 0 < |t| < 1");
  if (!in_unit_disk(y2)) throw params_error("y2 must lie in the unit disk");
  for (const auto& h : higher) {
    if (!in_unit_disk(h[0]) || !in_unit_disk(h[1]))
      throw params_error("fixed points must lie in the unit disk");
    if (!in_punctured_disk(h[2])) throw params_error("multipliers must satisfy 0 < |t| < 1");
  }
}

GeneratorMatrices generators_genus2(const SchottkyTuple& x) {
  ParamsPtr P = x.t1.params();
  Padic one = one_of(P), zero = Padic::zero(P);
  GeneratorMatrices G;
  // w1 <-> [[-t1, 0], [1-t1, -1]]
  G.w.emplace_back(-x.t1, zero, one - x.t1, -one);
  // w2 <-> [[1, (t2-1) y2], [0, t2]]
  G.w.emplace_back(one, (x.t2 - one) * x.y2, zero, x.t2);
  return G;
}

GeneratorMatrices generators_general(const SchottkyTuple& x) {
  ParamsPtr P = x.t1.params();
  Padic one = one_of(P), zero = Padic::zero(P);
  GeneratorMatrices G;
  G.w.push_back(MoebiusMap::from_fixed_points(ProjPoint::of(zero), ProjPoint::of(one), x.t1));
  G.w.push_back(
      MoebiusMap::from_fixed_points(ProjPoint::infinity(), ProjPoint::of(x.y2), x.t2));
  for (const auto& h : x.higher)
    G.w.push_back(
        MoebiusMap::from_fixed_points(ProjPoint::of(h[0]), ProjPoint::of(h[1]), h[2]));
  return G;
}

MoebiusMap composite_w(const SchottkyTuple& x) {
  auto G = generators_genus2(x);
  return G.w[1].inverse().compose(G.w[0]);
}

MoebiusMap composite_w_displayed(const SchottkyTuple& x) {
  ParamsPtr P = x.t1.params();
  Padic one = one_of(P);
  Padic a = x.y2 * (one - x.t1) * (one - x.t2) - x.t1 * x.t2;
  Padic b = x.y2 * (x.t2 - one);
  return MoebiusMap(a, b, one - x.t1, -one);
}

MoebiusMap word_matrix(const GeneratorMatrices& gens, const std::vector<int>& word) {
  if (word.empty()) throw params_error("empty word");
  ParamsPtr P = gens.w.front().params();
  MoebiusMap m = MoebiusMap::identity(P);
  for (int letter : word) {
    int idx = std::abs(letter) - 1;
    if (idx < 0 || idx >= int(gens.w.size())) throw params_error("word letter out of range");
    m = m.compose(letter > 0 ? gens.w[idx] : gens.w[idx].inverse());
  }
  return m;
}

SigmaActionResult sigma_action_genus2(const SchottkyTuple& x, RootOrder order) {
  SigmaActionResult R;
  ParamsPtr P = x.t1.params();
  Padic one = one_of(P);
  MoebiusMap w = composite_w(x);
  auto fp = moebius_fixed_points(w);
  if (fp.kind == FixedPointResult::Kind::NoRoot) {
    R.status = SigmaActionResult::Status::NoRoot;
    return R;
  }
  if (fp.kind == FixedPointResult::Kind::Parabolic || fp.z1.inf || fp.z2.inf) {
    R.status = SigmaActionResult::Status::Parabolic;
    return R;
  }
  R.z1 = fp.z1.z;
  R.z2 = fp.z2.z;
  if (order == RootOrder::Swapped) std::swap(R.z1, R.z2);
  // beta(z) = ((z2-1) z + z1(1-z2)) / ((z1-1) z + z2(1-z1))
  R.beta = MoebiusMap(R.z2 - one, R.z1 * (one - R.z2), R.z1 - one, R.z2 * (one - R.z1));
  ProjPoint eta = R.beta.apply(ProjPoint::of(Padic::zero(P)));
  if (eta.inf) {
    R.status = SigmaActionResult::Status::Parabolic;
    return R;
  }
  R.eta = eta.z;
  R.image.t1 = x.t1;
  R.image.y2 = R.eta;
  R.image.t2 = x.t1 * x.t2;
  R.status = SigmaActionResult::Status::Ok;
  return R;
}

std::pair<Padic, Padic> TSolution::at(const Padic& s) const {
  if (!is_line) return {t1, t2};
  return {base1 + s * dir1, s};
}

TSolution solve_t_from_roots(const Padic& z1, const Padic& z2) {
  ParamsPtr P = z1.params();
  Padic one = one_of(P);
  Padic prod = z1 * z2;
  Padic sum = z1 + z2;
  if (prod.is_zero()) throw params_error("z1 z2 must be nonzero");
  TSolution out;
  Padic det = prod - (sum - one);  // zero on the critical curve
  if (det.is_zero()) {
    out.is_line = true;
    out.base1 = (prod - one) / prod;
    out.dir1 = one / prod;
    return out;
  }
  // subtracting the equations: (z1 z2 - z1 - z2 + 1) t1 = z1 z2 - 1 - (z1 + z2)
  out.t1 = (prod - one - sum) / det;
  out.t2 = prod * out.t1 - prod + one;
  return out;
}

EpsilonFamilyRow epsilon_family(const Padic& eps, const Padic& s) {
  EpsilonFamilyRow row;
  ParamsPtr P = eps.params();
  Padic one = one_of(P);
  row.p_str = std::to_string(P->p);
  row.eps_str = eps.to_string(4);
  row.s_str = s.to_string(4);
  if (!eps.is_zero() && eps.valuation() < 1)
    throw params_error("epsilon must satisfy |eps| < 1");
  if (!in_punctured_disk(s)) throw params_error("s must satisfy 0 < |s| < 1");
  // z^2 - eps z + (1 + eps) = 0
  Padic disc = eps * eps - Padic::from_long(P, 4) * (one + eps);
  std::optional<Padic> r;
  if (!disc.is_zero()) r = padic_sqrt(disc);
  if (!r) {
    row.no_root = true;
    return row;
  }
  Padic two = Padic::from_long(P, 2);
  Padic za = (eps + *r) / two;
  Padic zb = (eps - *r) / two;
  if (Padic::compare_canonical(zb, za) < 0) std::swap(za, zb);
  row.z1 = za;
  row.z2 = zb;
  // (t1, t2) from the on-curve line parametrization with parameter s
  Padic prod = row.z1 * row.z2;
  row.t1 = (prod - one) / prod + s / prod;
  row.t2 = s;
  auto eta_of = [&](const Padic& u, const Padic& v) {
    // beta(0) = u (v - 1) / (v (u - 1))
    return (u * (v - one)) / (v * (u - one));
  };
  row.eta = eta_of(row.z1, row.z2);
  row.eta_swapped = eta_of(row.z2, row.z1);
  row.abs_z1 = row.z1.abs();
  row.abs_z2 = row.z2.abs();
  row.abs_z1m1 = (row.z1 - one).abs();
  row.abs_z2m1 = (row.z2 - one).abs();
  row.abs_t1 = row.t1.abs();
  row.abs_t2 = row.t2.abs();
  row.abs_eta = row.eta.abs();
  row.abs_eta_swapped = row.eta_swapped.abs();
  row.critical_residual = (prod - (row.z1 + row.z2) + one).abs();
  row.lineq_residual = (prod * row.t1 - row.t2 - (prod - one)).abs();
  return row;
}

EigenComparison compare_eigenvalues(const PadicVector& coords, const PadicVector& image_coords,
                                    int rho, double base, double alpha) {
  EigenComparison out;
  PNorm nx = coords.norm(), ni = image_coords.norm();
  if (nx.zero || ni.zero) throw params_error("coordinate vectors must be nonzero");
  out.exp_id = rho + nx.exp;
  out.exp_sigma = rho + ni.exp;
  out.lambda_id = std::pow(base, alpha * double(out.exp_id));
  out.lambda_sigma = std::pow(base, alpha * double(out.exp_sigma));
  return out;
}

namespace {

std::vector<Padic> grid_values(const ParamsPtr& P, const SearchGrid& grid) {
  std::vector<Padic> vals;
  for (int v : grid.valuations) {
    long dmax = grid.all_digits ? P->p - 1 : 1;
    for (long d = 1; d <= dmax; ++d) vals.push_back(Padic::from_long(P, d).shift(v));
  }
  return vals;
}

struct RenormResult {
  bool ok = false;
  bool not_hyperbolic = false;
  PadicVector coords;
  std::string desc;
};

// Renormalize an image generator pair (genus 2) back to normal form:
// attracting of the first -> 0, repelling -> 1, attracting of the second -> inf.
// RootOrder::Swapped exchanges the roles of the second generator's fixed points
// (the normalization freedom the paper leaves open).
RenormResult renormalize_pair(const MoebiusMap& M1, const MoebiusMap& M2, RootOrder order) {
  RenormResult out;
  auto mult1 = moebius_multiplier(M1);
  auto mult2 = moebius_multiplier(M2);
  if (mult1.kind != MultiplierResult::Kind::Hyperbolic ||
      mult2.kind != MultiplierResult::Kind::Hyperbolic) {
    out.not_hyperbolic = true;
    return out;
  }
  auto fp1 = moebius_fixed_points(M1);
  auto fp2 = moebius_fixed_points(M2);
  if (fp1.kind != FixedPointResult::Kind::TwoPoints ||
      fp2.kind != FixedPointResult::Kind::TwoPoints)
    return out;
  ParamsPtr P = mult1.t.params();
  auto attracting_first = [](const MoebiusMap& M, FixedPointResult& fp) {
    Padic d1 = M.derivative_at(fp.z1);
    bool attr1 = d1.is_zero() ? false : d1.valuation() > 0;
    if (!attr1) std::swap(fp.z1, fp.z2);
  };
  attracting_first(M1, fp1);
  attracting_first(M2, fp2);
  if (order == RootOrder::Swapped) std::swap(fp2.z1, fp2.z2);
  // nu maps (a1, r1, a2) -> (0, 1, inf)
  const ProjPoint &A = fp1.z1, &Rr = fp1.z2, &B = fp2.z1;
  MoebiusMap nu;
  Padic one = one_of(P), zero = Padic::zero(P);
  if (B.inf) {
    if (A.inf || Rr.inf) return out;
    nu = MoebiusMap(one, -A.z, zero, Rr.z - A.z);
  } else if (A.inf) {
    nu = MoebiusMap(zero, Rr.z - B.z, one, -B.z);
  } else if (Rr.inf) {
    nu = MoebiusMap(one, -A.z, one, -B.z);
  } else {
    nu = MoebiusMap(Rr.z - B.z, -A.z * (Rr.z - B.z), Rr.z - A.z, -B.z * (Rr.z - A.z));
  }
  ProjPoint y2p = nu.apply(fp2.z2);
  if (y2p.inf) return out;
  out.ok = true;
  out.coords = PadicVector({mult1.t, y2p.z, mult2.t});
  std::ostringstream os;
  os << "(t1'=" << mult1.t.to_string(3) << ", y2'=" << y2p.z.to_string(3)
     << ", t2'=" << mult2.t.to_string(3) << ")";
  out.desc = os.str();
  return out;
}

}  // namespace

SearchOutcome search_norm_decreasing(const StableGraph& g, const std::vector<int>& tree,
                                     ParamsPtr P, const SearchGrid& grid) {
  SearchOutcome out;
  if (g.genus() != 2) throw params_error("generic search handles genus 2; use the higher-genus route");
  auto aut = automorphism_group(g);
  auto basis = lasso_basis(g, tree, 0);
  auto orbit = basis_orbit_closed(g, aut, basis);
  // collect the distinct breaking image bases among effective representatives
  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> breakers;
  for (int rep : aut.effective_reps) {
    const auto& imgs = orbit.images[rep];
    bool breaks = false;
    for (const auto& w : imgs)
      if (w.size() != 1) breaks = true;
    if (!breaks) continue;
    std::ostringstream nm;
    nm << "aut" << rep << "[";
    for (size_t i = 0; i < imgs.size(); ++i)
      nm << (i ? ", " : "") << "w" << (i + 1) << "->" << word_to_string(imgs[i]);
    nm << "]";
    breakers.emplace_back(nm.str(), imgs);
  }
  if (breakers.empty()) {
    out.found = false;
    out.summary = "basis orbit closed: no norm-decreasing automorphism can exist";
    return out;
  }
  auto tvals = grid_values(P, grid);
  Padic minus_one = -one_of(P);
  for (const Padic& t1 : tvals)
    for (const Padic& t2 : tvals) {
      SchottkyTuple x;
      x.t1 = t1;
      x.y2 = minus_one;
      x.t2 = t2;
      auto gens = generators_genus2(x);
      PadicVector cx = x.coords();
      for (const auto& [name, words] : breakers) {
        MoebiusMap M1 = word_matrix(gens, words[0]);
        MoebiusMap M2 = word_matrix(gens, words[1]);
        for (RootOrder ord : {RootOrder::Canonical, RootOrder::Swapped}) {
          SearchRow row;
          row.tuple_desc = "t1=" + t1.to_string(3) + " t2=" + t2.to_string(3);
          row.sigma_name = name;
          for (const auto& w : words) row.image_words.push_back(word_to_string(w));
          row.order = ord;
          RenormResult rr;
          try {
            rr = renormalize_pair(M1, M2, ord);
          } catch (const precision_error&) {
            rr.ok = false;
          }
          if (rr.not_hyperbolic) {
            row.not_hyperbolic = true;
          } else if (!rr.ok) {
            row.no_root = true;
          } else {
            row.image_desc = rr.desc;
            PNorm ni = rr.coords.norm(), nx = cx.norm();
            row.norm_exp_x = nx.exp;
            row.norm_exp_image = ni.zero ? std::numeric_limits<long>::min() : ni.exp;
            bool valid = true;
            for (const auto& c : rr.coords.components())
              if (!c.is_zero() && c.valuation() < 0) valid = false;
            row.valid_tuple = valid;
            row.witness = valid && (ni.zero || ni.exp < nx.exp);
          }
          if (row.witness && !out.found) {
            out.found = true;
            out.best = row;
          }
          out.rows.push_back(std::move(row));
        }
      }
    }
  std::ostringstream sum;
  sum << (out.found ? "witness found" : "NotFound") << " over " << out.rows.size()
      << " evaluated rows (" << breakers.size() << " breaking automorphism classes)";
  out.summary = sum.str();
  return out;
}

std::vector<BetaNormRow> beta_norm_report(ParamsPtr P, const SearchGrid& grid) {
  std::vector<BetaNormRow> rows;
  auto tvals = grid_values(P, grid);
  Padic one = one_of(P);
  for (const Padic& t1 : tvals)
    for (const Padic& t2 : tvals) {
      BetaNormRow row;
      row.t1_str = t1.to_string(3);
      row.t2_str = t2.to_string(3);
      SchottkyTuple x;
      x.t1 = t1;
      x.y2 = -one;
      x.t2 = t2;
      MoebiusMap w = composite_w(x);
      auto fp = moebius_fixed_points(w);
      if (fp.kind != FixedPointResult::Kind::TwoPoints || fp.z1.inf || fp.z2.inf) {
        row.no_root = true;
        rows.push_back(std::move(row));
        continue;
      }
      auto factor = [&](const Padic& z1, const Padic& z2) -> PNorm {
        // |z1/z2| * |(1-z2)/(1-z1)|
        Padic num = z1 * (one - z2);
        Padic den = z2 * (one - z1);
        if (num.is_zero()) return PNorm{};
        return PNorm::of_exp(num.abs().exp - den.abs().exp);
      };
      row.factor_canonical = factor(fp.z1.z, fp.z2.z);
      row.factor_swapped = factor(fp.z2.z, fp.z1.z);
      rows.push_back(std::move(row));
    }
  return rows;
}

HigherGenusSearch search_higher_genus(const StableGraph& g, const std::vector<int>& tree,
                                      ParamsPtr P, const SearchGrid& grid) {
  HigherGenusSearch out;
  auto cls = classify_spectrum(g, tree);
  out.qualifying_mouth = !cls.contained;
  out.rows = beta_norm_report(P, grid);
  for (const auto& r : out.rows) {
    if (r.no_root) continue;
    if ((!r.factor_canonical.zero && r.factor_canonical.exp < 0) ||
        (!r.factor_swapped.zero && r.factor_swapped.exp < 0))
      out.factor_below_one = true;
  }
  out.found = out.qualifying_mouth && out.factor_below_one;
  std::ostringstream os;
  os << (out.found ? "witness construction available" : "NotFound") << ": qualifying mouth "
     << (out.qualifying_mouth ? "present" : "absent") << ", |beta(xi)| < 1 "
     << (out.factor_below_one ? "attained" : "not attained") << " on the grid";
  out.summary = os.str();
  return out;
}

}  // namespace pspectra
