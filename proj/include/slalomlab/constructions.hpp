#pragma once

#include <optional>
#include <set>
#include <vector>

#include "slalomlab/chain.hpp"
#include "slalomlab/omega.hpp"

namespace slalomlab {

struct ChainStepReport {
  unsigned horizon = 0;
  std::vector<std::vector<unsigned>> g_alphas;  // g_α(n), n = 0..horizon
  std::vector<unsigned> g;                      // strictly increasing, g.back() ≥ horizon
  std::vector<unsigned> m_alphas;               // g(n) ≥ g_α(n) for n ≥ m_α
  std::vector<unsigned> settle;                 // F_α(n) ∈ Φ(n) for n ≥ settle[α]
  std::vector<std::vector<Slalom>> f_blocks;    // F_α(n), one per window n < g.size() − 1
  std::vector<std::vector<Slalom>> phi;         // distinct blocks per window
  Slalom a;
  unsigned cutoff = 0;
  Slalom a_beta;
  std::vector<Rational> bounds;  // Σ_{g(n)≤i<g(n+1)} |A(i)|/2^i
  Rational input_sum;            // Σ over inputs of Σ_i |A_α(i)|/2^i
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// One finite step of the ⊆*-chain extension. Φ(n) holds the blocks of the
/// first n inputs, so the window bound n/2^n holds exactly.
ChainStepReport chain_step(const std::vector<Slalom>& existing, const PathReal& f_beta, unsigned horizon);

/// X_α = {x < M : bit α of x}. A sign pattern p is witnessed by p + q·2^r for
/// every q < ⌊M/2^r⌋; throws when that count is below `witnesses`.
std::vector<std::set<std::uint64_t>> independent_subsets(unsigned r, std::uint64_t universe,
                                                         std::uint64_t witnesses = 1);

/// Element visited at level n ≥ 2 by the sawtooth 0 | 0 1 | 0 1 2 | ... over
/// a universe of size M. Levels 0 and 1 get nothing.
std::optional<std::uint64_t> sawtooth_element(unsigned level, std::uint64_t universe);

/// Levels below `horizon` whose sawtooth element lies in `subset`.
std::set<unsigned> schedule_levels(const std::set<std::uint64_t>& subset, std::uint64_t universe, unsigned horizon);

struct BlockPair {
  Slalom base;
  Slalom z0;
  Slalom z1;

  void validate() const;  // throws std::invalid_argument naming the level
  static BlockPair standard(unsigned horizon);  // S(n) = {0,1}, Z0 = {0}, Z1 = {1}
};

/// S_α(n) = Z1(n) for n ∈ X, Z0(n) otherwise (n ≥ 2).
Slalom build_S_alpha(const BlockPair& bp, const std::set<unsigned>& x);

struct Pattern {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
};

/// Levels in [2, horizon) lying in every positive X and in no negative X.
std::set<unsigned> pattern_levels(const std::vector<std::set<unsigned>>& xs, const Pattern& pattern, unsigned horizon);

struct WitnessPoint {
  OmegaPoint point;
  bool ok = false;
};

struct IndependenceReport {
  Slalom t;
  std::vector<WitnessPoint> points;
  bool ok() const;
};

/// T(n) = Z1(n) on Y, S(n) elsewhere; emits (T ∩ (k×2^k), k) for k in (min Y, H].
IndependenceReport independence_check(const BlockPair& bp, const std::vector<Slalom>& alphas,
                                      const Pattern& pattern, const std::set<unsigned>& y, unsigned horizon);

struct BoundingResult {
  std::optional<Slalom> bound;
  std::optional<SaturationWitness> saturation;
};

/// The levelwise union when it lies in S.
BoundingResult bounding_search(const std::vector<Slalom>& family, unsigned horizon);

}  // namespace slalomlab
