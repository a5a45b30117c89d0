#pragma once

// Random instance generators and brute-force oracles shared by the unit and
// acceptance suites. Oracles here never call the counting or decision code
// they are used to check.

#include <functional>

#include "slalomlab/family.hpp"
#include "slalomlab/measure.hpp"
#include "slalomlab/omega.hpp"
#include "slalomlab/random.hpp"

namespace slalomlab::testing {

inline LevelSet random_nonsaturated(Rng& rng, unsigned j, unsigned max_size = 1000) {
  while (true) {
    std::vector<std::uint64_t> cols;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
      if (rng.coin() && cols.size() < max_size) cols.push_back(c);
    LevelSet x(j, std::move(cols));
    if (!x.saturated()) return x;
  }
}

/// A window whose trace extends `base` below its level with probability 3/4.
inline WindowGen random_window(Rng& rng, unsigned max_level, const Slalom& base) {
  const unsigned n = static_cast<unsigned>(rng.below(max_level + 1));
  std::vector<LevelSet> levels;
  for (unsigned j = 0; j < n; ++j) {
    if (j < base.horizon() && !base[j].saturated() && rng.coin(3, 4))
      levels.push_back(base[j]);
    else
      levels.push_back(random_nonsaturated(rng, j));
  }
  return WindowGen(Slalom(std::move(levels)), n);
}

/// Small set generator: a few columns on levels below `horizon`.
inline Slalom random_small_set(Rng& rng, unsigned horizon, unsigned per_level = 2) {
  std::vector<LevelSet> levels;
  for (unsigned j = 0; j < horizon; ++j) {
    if (j == 0 || rng.coin(1, 2)) {
      levels.emplace_back(j);
      continue;
    }
    const std::uint64_t cap = std::uint64_t{1} << j;
    levels.emplace_back(j, rng.distinct(rng.below(std::min<std::uint64_t>(per_level, cap) + 1), cap));
  }
  return Slalom(std::move(levels));
}

/// Mixed conjunct with up to 3 positives and 3 negatives. Windows share a
/// common random base trace so agreement and conflict both occur.
inline Conjunct random_conjunct(Rng& rng, unsigned set_horizon, unsigned window_level) {
  std::vector<LevelSet> base_levels;
  for (unsigned j = 0; j < window_level; ++j) base_levels.push_back(random_nonsaturated(rng, j, 3));
  const Slalom base(std::move(base_levels));
  auto gen = [&]() -> Generator {
    if (rng.coin(1, 3)) return random_window(rng, window_level, base);
    return SetGen{random_small_set(rng, set_horizon)};
  };
  Conjunct c;
  const auto np = rng.below(4), nn = rng.below(4);
  for (std::uint64_t i = 0; i < np; ++i) c.positives.push_back(gen());
  for (std::uint64_t i = 0; i < nn; ++i) {
    // Negate a copy of a positive now and then, to hit the containment cases.
    if (!c.positives.empty() && rng.coin(1, 4))
      c.negatives.push_back(c.positives[rng.below(c.positives.size())]);
    else
      c.negatives.push_back(gen());
  }
  return c;
}

using slalomlab::random_bucket;

/// Oracle: count points of exactly `level` by explicit enumeration.
inline BigInt brute_count(const Conjunct& c, unsigned level) {
  BigInt n = 0;
  for_each_point_at(level, [&](const OmegaPoint& p) {
    if (eval(c, p)) ++n;
    return true;
  });
  return n;
}

inline BigInt brute_count(const AlgebraTerm& t, unsigned level) {
  BigInt n = 0;
  for_each_point_at(level, [&](const OmegaPoint& p) {
    if (eval_term(t, p)) ++n;
    return true;
  });
  return n;
}

/// Oracle: the truncated path space of the random slalom. Levels below
/// name.level copy the trace; every level j in [max(1, name.level), L) draws
/// f(j) uniformly and the slalom holds 2^j ∖ {f(j)}. Returns the exact
/// fraction of paths satisfying `pred`.
class PathSpace {
 public:
  PathSpace(SlalomName name, unsigned L) : name_(std::move(name)), L_(L), f_(L, 0) {}

  bool in(unsigned j, std::uint64_t c) const {
    if (j < name_.level) return name_.trace[j].contains(c);
    return j > 0 && c != f_[j];
  }
  bool contains(const Slalom& a) const {
    for (unsigned j = 0; j < a.horizon(); ++j)
      for (auto c : a[j].columns())
        if (j >= L_ || !in(j, c)) return false;
    return true;
  }
  bool matches(const WindowGen& w) const {
    for (unsigned j = 0; j < w.level; ++j)
      for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
        if (in(j, c) != w.trace[j].contains(c)) return false;
    return true;
  }
  bool holds(const Generator& g) const {
    if (const auto* s = std::get_if<SetGen>(&g)) return contains(s->a);
    return matches(std::get<WindowGen>(g));
  }
  bool holds(const Conjunct& c) const {
    for (const auto& g : c.positives)
      if (!holds(g)) return false;
    for (const auto& g : c.negatives)
      if (holds(g)) return false;
    return true;
  }

  Rational fraction(const std::function<bool(const PathSpace&)>& pred) {
    BigInt hits = 0, total = 0;
    walk(std::max(1u, name_.level), pred, hits, total);
    Rational r(hits, total);
    r.canonicalize();
    return r;
  }

 private:
  void walk(unsigned j, const std::function<bool(const PathSpace&)>& pred, BigInt& hits, BigInt& total) {
    if (j >= L_) {
      ++total;
      if (pred(*this)) ++hits;
      return;
    }
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c) {
      f_[j] = c;
      walk(j + 1, pred, hits, total);
    }
  }

  SlalomName name_;
  unsigned L_;
  std::vector<std::uint64_t> f_;
};

}  // namespace slalomlab::testing
