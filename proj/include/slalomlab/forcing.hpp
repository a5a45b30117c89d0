#pragma once

#include <map>
#include <vector>

#include "slalomlab/omega.hpp"

namespace slalomlab {

/// Canonical π-base elements double as conditions of Q.
using QCondition = PiBaseElement;

/// Finite partial function from ω∖2 to {0,1}; the order is reverse inclusion.
using CohenCondition = std::map<unsigned, int>;

/// p ≤ q, i.e. p ⊆* q, for canonical conditions.
bool q_order(const QCondition& p, const QCondition& q);

/// The closed rules of q_order without the canonicity check.
bool order_rules(const QCondition& p, const QCondition& q);

/// 1 if the lower half 2^{n−1} ⊆ F, else 0 (n ≥ 2).
int d(unsigned n, const LevelSet& f);

/// Sets B, C ⊇ F of size 2^n − 1 with d(B) = 1 and d(C) = 0; needs |F| < 2^{n−1}.
std::pair<LevelSet, LevelSet> d_split(unsigned n, const LevelSet& f);

/// τ ≤ σ: τ extends σ.
bool cohen_leq(const CohenCondition& tau, const CohenCondition& sigma);

/// Values forced by the closed-form rule: d_m(S(m)) below the window level n;
/// from n on, 1 when the lower half of 2^m lies in A(m), 0 when the upper half does.
CohenCondition cohen_shortcut(const QCondition& p);

struct ProjectionOracle {
  std::uint64_t extensions = 0;  // extensions built and checked
};

/// The shortcut, cross-checked for every m < search_depth by building
/// extensions with window level m + 1 and reading off d_m. Throws
/// std::logic_error naming m on disagreement.
CohenCondition cohen_project(const QCondition& p, unsigned search_depth, ProjectionOracle* stats = nullptr);

/// Canonical conditions with window level in [lo, hi], traces drawn from a
/// fixed set of per-level representatives and A(j) ∈ {∅, lower, upper} on
/// [n, a_top).
std::vector<QCondition> condition_universe(unsigned lo, unsigned hi, unsigned a_top);

/// The condition built in the lifting step for τ ≤ Φ(p).
QCondition lift(const QCondition& p, const CohenCondition& sigma, const CohenCondition& tau);

struct ProjectionReport {
  std::uint64_t conditions = 0;
  std::uint64_t cohen_conditions = 0;
  std::uint64_t exact_hits = 0;
  std::uint64_t order_pairs = 0;
  std::uint64_t lifts = 0;
  std::uint64_t oracle_extensions = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

ProjectionReport verify_projection(unsigned depth);

struct MathiasCondition {
  unsigned n = 0;
  std::vector<std::uint64_t> s;  // sorted, ⊆ [0, 2^n)
  Slalom excluded;               // F = [2^n, ∞) ∖ f[excluded], excluded zero below n

  bool in_f(std::uint64_t x) const;
  bool interval_hitting(unsigned upto) const;  // (s ∪ F) meets [2^j, 2^{j+1}) for j < upto
  std::string str() const;
};

MathiasCondition mathias_embed(const QCondition& p);

/// (s', F') ≤ (s, F): s ⊆ s', F' ⊆ F, s' ∖ s ⊆ F.
bool mathias_leq(const MathiasCondition& lower, const MathiasCondition& upper);

struct MathiasReport {
  std::uint64_t conditions = 0;
  std::uint64_t pairs = 0;
  std::uint64_t related = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

MathiasReport mathias_order_check(unsigned depth);

}  // namespace slalomlab
