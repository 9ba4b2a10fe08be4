#pragma once

#include <string>
#include <vector>

#include "pspectra/config.hpp"
#include "pspectra/schottky.hpp"
#include "pspectra/spectral.hpp"

namespace pspectra {

/// Fixed-format float rendering so identical runs emit identical bytes.
std::string fmt_double(double v);
std::string fmt_norm(const PNorm& n, const FieldParams& P);

/// Epsilon-family report: for each prime, rows over the epsilon grid
/// eps = j*p (j = 0..points-1) at line parameter s = p. CSV columns:
/// p,eps,s,status,|z1|,|z2|,|z1-1|,|z2-1|,|t1|,|t2|,|eta|,|eta_swapped|,
/// critical_residual,lineq_residual
std::string epsilon_family_csv(const std::vector<long>& primes, int points, int precision);
std::string epsilon_family_json(const std::vector<long>& primes, int points, int precision);

/// Norm-decreasing search report for a genus-2 graph over the standard grid.
std::string search_csv(const SearchOutcome& s, const FieldParams& P);
std::string search_json(const StableGraph& g, const SearchOutcome& s, const RunConfig& cfg);
std::string higher_search_json(const StableGraph& g, const HigherGenusSearch& s,
                               const RunConfig& cfg);

std::string classification_json(const StableGraph& g, const std::vector<int>& tree,
                                const Classification& c);

/// Wavelet eigenvalue table plus the lattice decision for a graph.
std::string spectrum_json(const StableGraph& g, const RunConfig& cfg);

std::string evolution_csv(const EvolutionTrace& tr);
std::string evolution_json(const EvolutionTrace& tr, const RunConfig& cfg);

}  // namespace pspectra
