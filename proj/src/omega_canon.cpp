#include <algorithm>
#include <map>
#include <stdexcept>

#include "slalomlab/omega.hpp"

namespace slalomlab {

Conjunct PiBaseElement::conjunct() const { return Conjunct{{SetGen{a}, window}, {}}; }

PiBaseElement canonicalize(const Slalom& a, const WindowGen& window) {
  if (!a.exact_tail()) throw std::invalid_argument("canonicalize needs an exact tail");
  const MeetVerdict v = meet_infinitude(Conjunct{{SetGen{a}, window}, {}});
  if (v.kind != MeetKind::Infinite) throw std::domain_error("meet is " + to_string(v.kind) + ": " + v.reason);

  unsigned m = std::max(window.level, 1u);
  while (a.at(m).size() + 1 >= (std::uint64_t{1} << m)) ++m;

  // Below m the canonical set part copies the trace, so equal meets give
  // equal representations.
  std::vector<LevelSet> trace, set_part;
  for (unsigned j = 0; j < std::max(m, a.horizon()); ++j) {
    const LevelSet level = j < window.level ? window.trace[j] : a.at(j);
    if (j < m) trace.push_back(level);
    set_part.push_back(level);
  }
  return PiBaseElement{Slalom(std::move(set_part)), WindowGen(Slalom(std::move(trace)), m)};
}

bool is_canonical(const PiBaseElement& e) {
  const unsigned m = e.window.level;
  if (m == 0 || !e.a.exact_tail() || e.a.at(m).size() + 1 >= (std::uint64_t{1} << m)) return false;
  for (unsigned j = 0; j < m; ++j)
    if (!(e.a.at(j) == e.window.trace[j])) return false;
  return meet_infinitude(e.conjunct()).kind == MeetKind::Infinite;
}

std::vector<PiBaseElement> pibase_enum(const std::vector<Slalom>& family, unsigned depth) {
  if (family.size() > 12) throw std::invalid_argument("pibase_enum: family larger than 12");
  std::vector<Slalom> unions;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << family.size()); ++mask) {
    Slalom u(0);
    for (std::size_t i = 0; i < family.size(); ++i)
      if (mask >> i & 1) u = unite(u, family[i]);
    if (classify(u, Ideal::S).status == Status::Yes) unions.push_back(std::move(u));
  }

  std::map<std::string, PiBaseElement> seen;
  for (const OmegaPoint& p : enum_omega(depth)) {
    const WindowGen w(p.trace, p.level);
    for (const auto& b : unions) {
      if (meet_infinitude(Conjunct{{SetGen{b}, w}, {}}).kind != MeetKind::Infinite) continue;
      PiBaseElement e = canonicalize(b, w);
      if (e.window.level > depth) continue;
      seen.emplace(to_string(e.window.trace) + " @" + std::to_string(e.window.level) + " | " + to_string(e.a), e);
    }
  }
  std::vector<PiBaseElement> out;
  for (auto& [key, e] : seen) out.push_back(std::move(e));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

LevelSet random_level(Rng& rng, unsigned j, std::uint64_t max_size) {
  const std::uint64_t cap = std::uint64_t{1} << j;
  const std::uint64_t k = rng.below(std::min(max_size, cap) + 1);
  return LevelSet(j, rng.distinct(k, cap));
}

// A uniformly chosen non-saturated subset of 2^j (rejection on the full set).
LevelSet random_trace_level(Rng& rng, unsigned j) {
  while (true) {
    std::vector<std::uint64_t> cols;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
      if (rng.coin()) cols.push_back(c);
    LevelSet x(j, std::move(cols));
    if (!x.saturated()) return x;
  }
}

Conjunct set_meet(std::initializer_list<const Slalom*> pos, std::initializer_list<const Slalom*> neg) {
  Conjunct c;
  for (const Slalom* s : pos) c.positives.push_back(SetGen{*s});
  for (const Slalom* s : neg) c.negatives.push_back(SetGen{*s});
  return c;
}

}  // namespace

Slalom random_sparse_slalom(Rng& rng, unsigned horizon, bool allow_saturation) {
  std::vector<LevelSet> levels;
  for (unsigned j = 0; j < horizon; ++j) {
    if (allow_saturation && j <= 12 && rng.coin(1, 8))
      levels.push_back(LevelSet::full(j));
    else if (j == 0)
      levels.emplace_back(0);
    else
      levels.push_back(random_level(rng, j, std::min<std::uint64_t>(std::uint64_t{1} << (j - 1), 6)));
  }
  return Slalom(std::move(levels));
}

FactReport fact_check(unsigned depth, unsigned trials, std::uint64_t seed) {
  if (depth > kCountCap) throw std::invalid_argument("fact_check depth exceeds counting cap");
  Rng rng(seed);
  FactReport rep;
  auto fail = [&](bool& clause, const std::string& what) {
    clause = false;
    if (rep.failures.size() < 20) rep.failures.push_back(what);
  };

  for (unsigned t = 0; t < trials; ++t) {
    const Slalom a = random_sparse_slalom(rng, depth);
    const Slalom b = random_sparse_slalom(rng, depth);
    const Slalom ab = unite(a, b);
    // A random levelwise subset of b.
    std::vector<LevelSet> sub;
    for (unsigned j = 0; j < depth; ++j) {
      std::vector<std::uint64_t> keep;
      for (std::uint64_t c : b[j].columns())
        if (rng.coin()) keep.push_back(c);
      sub.emplace_back(j, std::move(keep));
    }
    const Slalom a_sub(std::move(sub));
    const std::string tag = "pair " + std::to_string(t) + ": ";
    ++rep.pairs;

    auto check_point = [&](const OmegaPoint& p) {
      ++rep.points_checked;
      const bool in_a = member(SetGen{a}, p), in_b = member(SetGen{b}, p);
      if (member(SetGen{ab}, p) != (in_a && in_b))
        fail(rep.union_clause, tag + "union identity fails at level " + std::to_string(p.level));
      if (in_b && !member(SetGen{a_sub}, p))
        fail(rep.antitone_clause, tag + "antitonicity fails at level " + std::to_string(p.level));
    };

    for_each_point(std::min(depth, kEnumCap), [&](const OmegaPoint& p) {
      check_point(p);
      return true;
    });
    for (unsigned m = kEnumCap + 1; m <= depth; ++m) {
      for (int s = 0; s < 8; ++s) {
        std::vector<LevelSet> levels;
        for (unsigned j = 0; j < m; ++j) {
          // Bias half the samples toward members of T_A ∩ T_B.
          LevelSet x = random_trace_level(rng, j);
          if (s % 2 == 0 && !ab.at(j).saturated()) {
            const LevelSet y = x.united(ab.at(j));
            if (!y.saturated()) x = y;
          }
          levels.push_back(std::move(x));
        }
        check_point(OmegaPoint(Slalom(std::move(levels)), m));
      }
    }

    for (unsigned m = 0; m <= depth; ++m) {
      const BigInt diff = point_count(set_meet({&ab}, {&a}), m) + point_count(set_meet({&ab}, {&b}), m) +
                          point_count(set_meet({&a, &b}, {&ab}), m);
      if (diff != 0) fail(rep.union_clause, tag + "union identity count differs at level " + std::to_string(m));
      if (point_count(set_meet({&b}, {&a_sub}), m) != 0)
        fail(rep.antitone_clause, tag + "antitonicity count differs at level " + std::to_string(m));
    }

    // T_S has points at level m exactly when no level below m saturates.
    const Slalom s = random_sparse_slalom(rng, depth, true);
    bool saturated_below = false;
    for (unsigned m = 0; m <= depth; ++m) {
      const bool has_points = point_count(set_meet({&s}, {}), m) > 0;
      if (has_points == saturated_below)
        fail(rep.infinitude_clause, tag + "point count at level " + std::to_string(m) + " disagrees with saturation");
      if (m < depth && s[m].saturated()) saturated_below = true;
    }
  }
  return rep;
}

}  // namespace slalomlab
