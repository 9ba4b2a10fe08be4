#include "pspectra/reports.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace pspectra {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_norm(const PNorm& n, const FieldParams& P) {
  if (n.zero) return "0";
  std::ostringstream os;
  os << (P.norm_base == NormBase::P ? "p^" : "q^") << n.exp;
  return os.str();
}

std::string epsilon_family_csv(const std::vector<long>& primes, int points, int precision) {
  std::ostringstream os;
  os << "p,eps,s,status,abs_z1,abs_z2,abs_z1_minus_1,abs_z2_minus_1,abs_t1,abs_t2,abs_eta,"
        "abs_eta_swapped,critical_residual,lineq_residual\n";
  for (long p : primes) {
    auto P = FieldParams::make(p, 1, precision, NormBase::P);
    for (int j = 0; j < points; ++j) {
      Padic eps = Padic::from_long(P, j * p);
      Padic s = Padic::from_long(P, p);
      auto row = epsilon_family(eps, s);
      os << p << "," << j * p << "," << p << ",";
      if (row.no_root) {
        os << "NoRoot,,,,,,,,,\n";
        continue;
      }
      os << "ok," << fmt_norm(row.abs_z1, *P) << "," << fmt_norm(row.abs_z2, *P) << ","
         << fmt_norm(row.abs_z1m1, *P) << "," << fmt_norm(row.abs_z2m1, *P) << ","
         << fmt_norm(row.abs_t1, *P) << "," << fmt_norm(row.abs_t2, *P) << ","
         << fmt_norm(row.abs_eta, *P) << "," << fmt_norm(row.abs_eta_swapped, *P) << ","
         << fmt_norm(row.critical_residual, *P) << "," << fmt_norm(row.lineq_residual, *P)
         << "\n";
    }
  }
  return os.str();
}

std::string epsilon_family_json(const std::vector<long>& primes, int points, int precision) {
  nlohmann::ordered_json out;
  out["report"] = "epsilon_family";
  out["points_per_prime"] = points;
  auto rows = nlohmann::ordered_json::array();
  for (long p : primes) {
    auto P = FieldParams::make(p, 1, precision, NormBase::P);
    for (int j = 0; j < points; ++j) {
      Padic eps = Padic::from_long(P, j * p);
      Padic s = Padic::from_long(P, p);
      auto row = epsilon_family(eps, s);
      nlohmann::ordered_json r;
      r["p"] = p;
      r["eps"] = j * p;
      r["s"] = p;
      if (row.no_root) {
        r["status"] = "NoRoot";
      } else {
        r["status"] = "ok";
        r["abs_z1"] = fmt_norm(row.abs_z1, *P);
        r["abs_z2"] = fmt_norm(row.abs_z2, *P);
        r["abs_z1_minus_1"] = fmt_norm(row.abs_z1m1, *P);
        r["abs_z2_minus_1"] = fmt_norm(row.abs_z2m1, *P);
        r["abs_t1"] = fmt_norm(row.abs_t1, *P);
        r["abs_t2"] = fmt_norm(row.abs_t2, *P);
        r["abs_eta"] = fmt_norm(row.abs_eta, *P);
        r["abs_eta_swapped"] = fmt_norm(row.abs_eta_swapped, *P);
        r["critical_residual"] = fmt_norm(row.critical_residual, *P);
        r["lineq_residual"] = fmt_norm(row.lineq_residual, *P);
        r["eta_in_punctured_disk"] =
            !row.abs_eta.zero && row.abs_eta.exp < 0;
        r["eta_swapped_in_punctured_disk"] =
            !row.abs_eta_swapped.zero && row.abs_eta_swapped.exp < 0;
      }
      rows.push_back(std::move(r));
    }
  }
  out["rows"] = rows;
  return out.dump(2);
}

std::string search_csv(const SearchOutcome& s, const FieldParams& P) {
  std::ostringstream os;
  (void)P;
  os << "tuple,sigma,order,status,norm_exp_x,norm_exp_image,valid_tuple,witness,image\n";
  for (const auto& r : s.rows) {
    os << "\"" << r.tuple_desc << "\",\"" << r.sigma_name << "\","
       << (r.order == RootOrder::Canonical ? "canonical" : "swapped") << ",";
    if (r.no_root)
      os << "NoRoot,,,,,";
    else if (r.not_hyperbolic)
      os << "NotHyperbolic,,,,,";
    else
      os << "ok," << r.norm_exp_x << "," << r.norm_exp_image << ","
         << (r.valid_tuple ? "yes" : "no") << "," << (r.witness ? "yes" : "no") << ",\""
         << r.image_desc << "\"";
    os << "\n";
  }
  return os.str();
}

std::string search_json(const StableGraph& g, const SearchOutcome& s, const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["report"] = "norm_decreasing_search";
  out["graph"] = nlohmann::json::parse(g.to_json());
  out["prime"] = cfg.prime;
  out["rows_evaluated"] = s.rows.size();
  out["summary"] = s.summary;
  out["found"] = s.found;
  if (s.best) {
    nlohmann::ordered_json w;
    w["tuple"] = s.best->tuple_desc;
    w["sigma"] = s.best->sigma_name;
    w["order"] = s.best->order == RootOrder::Canonical ? "canonical" : "swapped";
    w["norm_exp_x"] = s.best->norm_exp_x;
    w["norm_exp_image"] = s.best->norm_exp_image;
    w["image"] = s.best->image_desc;
    out["witness"] = w;
  } else {
    out["witness"] = nullptr;
  }
  return out.dump(2);
}

std::string higher_search_json(const StableGraph& g, const HigherGenusSearch& s,
                               const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["report"] = "norm_decreasing_search_higher_genus";
  out["graph"] = nlohmann::json::parse(g.to_json());
  out["prime"] = cfg.prime;
  out["qualifying_mouth"] = s.qualifying_mouth;
  out["beta_factor_below_one_on_grid"] = s.factor_below_one;
  out["found"] = s.found;
  out["summary"] = s.summary;
  auto rows = nlohmann::ordered_json::array();
  auto P = FieldParams::make(cfg.prime, 1, cfg.precision, NormBase::P);
  for (const auto& r : s.rows) {
    nlohmann::ordered_json jr;
    jr["t1"] = r.t1_str;
    jr["t2"] = r.t2_str;
    if (r.no_root) {
      jr["status"] = "NoRoot";
    } else {
      jr["status"] = "ok";
      jr["beta_factor_canonical"] = fmt_norm(r.factor_canonical, *P);
      jr["beta_factor_swapped"] = fmt_norm(r.factor_swapped, *P);
    }
    rows.push_back(std::move(jr));
  }
  out["rows"] = rows;
  return out.dump(2);
}

std::string classification_json(const StableGraph& g, const std::vector<int>& tree,
                                const Classification& c) {
  nlohmann::ordered_json out;
  out["graph"] = nlohmann::json::parse(g.to_json());
  out["genus"] = g.genus();
  out["stable"] = g.is_stable();
  out["spanning_tree"] = tree;
  auto mouths = nlohmann::ordered_json::array();
  for (const auto& m : c.mouths) {
    nlohmann::ordered_json jm;
    jm["corners"] = {m.corner_u, m.corner_v};
    jm["arm_length"] = m.arm_length;
    jm["arms"] = {m.arms[0], m.arms[1], m.arms[2]};
    mouths.push_back(std::move(jm));
  }
  out["mouths"] = mouths;
  out["decision"] = c.contained ? "Contained" : "NotContained";
  if (c.witness_mouth) {
    nlohmann::ordered_json w;
    w["corners"] = {c.witness_mouth->corner_u, c.witness_mouth->corner_v};
    w["corner"] = c.witness_corner;
    out["witness"] = w;
  } else {
    out["witness"] = nullptr;
  }
  out["explanation"] = c.explanation;
  return out.dump(2);
}

std::string spectrum_json(const StableGraph& g, const RunConfig& cfg) {
  nlohmann::ordered_json out;
  auto P = cfg.make_params();
  auto tree = g.spanning_tree();
  auto cls = classify_spectrum(g, tree);
  out["graph"] = nlohmann::json::parse(g.to_json());
  out["genus"] = g.genus();
  out["decision"] = cls.contained ? "Contained" : "NotContained";
  out["explanation"] = cls.explanation;
  double base = P->norm_base_value();
  RadialSymbol sym = RadialSymbol::power_law(*P, cfg.lambda, cfg.alpha);
  // untwisted table: lambda_J(gamma) = f~(1 - gamma)
  auto table = nlohmann::ordered_json::array();
  std::vector<double> hg_values;
  for (int gamma : {0, -1, -2}) {
    nlohmann::ordered_json row;
    row["gamma"] = gamma;
    double lj = sym.value_at_norm_exp(1 - gamma);
    row["lambda_J_id"] = fmt_double(lj);
    row["lambda_H_id"] = fmt_double(lj - cfg.lambda);
    hg_values.push_back(lj - cfg.lambda);
    table.push_back(std::move(row));
  }
  // twisted evidence from the norm-decreasing hunt (genus 2: generic pipeline)
  nlohmann::ordered_json twisted;
  if (g.genus() == 2) {
    SearchOutcome s = search_norm_decreasing(g, tree, P, SearchGrid{});
    twisted["search_summary"] = s.summary;
    twisted["witness_found"] = s.found;
    if (s.found && s.best) {
      double lid = std::pow(base, cfg.alpha * double(cfg.rho + s.best->norm_exp_x));
      double lsig = std::pow(base, cfg.alpha * double(cfg.rho + s.best->norm_exp_image));
      twisted["lambda_J_id"] = fmt_double(lid);
      twisted["lambda_J_sigma"] = fmt_double(lsig);
      double avg = 0.5 * (lid + lsig) - cfg.lambda;
      twisted["lambda_H_G_average"] = fmt_double(avg);
      hg_values.push_back(avg);
    }
  } else {
    HigherGenusSearch s = search_higher_genus(g, tree, P, SearchGrid{});
    twisted["search_summary"] = s.summary;
    twisted["witness_found"] = s.found;
  }
  out["eigen_table"] = table;
  out["twisted"] = twisted;
  auto lat = spectrum_in_lattice(hg_values, cfg.lambda, base, cfg.tol.lattice);
  nlohmann::ordered_json jl;
  jl["base"] = fmt_double(base);
  jl["contained"] = lat.contained;
  if (!lat.contained) jl["witness_value"] = fmt_double(lat.witness);
  out["lattice_check"] = jl;
  if (cfg.degree > 1) {
    // second reading with base p (the paper states both p^Z and q^Z forms)
    auto latp = spectrum_in_lattice(hg_values, cfg.lambda, double(cfg.prime), cfg.tol.lattice);
    nlohmann::ordered_json jp;
    jp["base"] = fmt_double(double(cfg.prime));
    jp["contained"] = latp.contained;
    out["lattice_check_base_p"] = jp;
  }
  return out.dump(2);
}

std::string evolution_csv(const EvolutionTrace& tr) {
  std::ostringstream os;
  os << "t,coset,re,im\n";
  for (size_t ti = 0; ti < tr.times.size(); ++ti) {
    const auto& u = tr.states[ti];
    for (long i = 0; i < u.size(); ++i) {
      os << fmt_double(tr.times[ti]) << "," << i << "," << fmt_double(u.at(i).real()) << ","
         << fmt_double(u.at(i).imag()) << "\n";
    }
  }
  return os.str();
}

std::string evolution_json(const EvolutionTrace& tr, const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["report"] = "cauchy_evolution";
  out["lambda"] = cfg.lambda;
  auto rows = nlohmann::ordered_json::array();
  for (size_t i = 0; i < tr.times.size(); ++i) {
    nlohmann::ordered_json r;
    r["t"] = fmt_double(tr.times[i]);
    r["mass_re"] = fmt_double(tr.masses[i].real());
    r["mass_im"] = fmt_double(tr.masses[i].imag());
    if (!std::isnan(tr.residuals[i])) r["residual"] = fmt_double(tr.residuals[i]);
    rows.push_back(std::move(r));
  }
  out["trace"] = rows;
  return out.dump(2);
}

}  // namespace pspectra
