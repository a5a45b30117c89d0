#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "slalomlab/omega.hpp"

namespace slalomlab {

namespace {

struct Parts {
  Slalom u;  // union of positive set generators
  std::vector<WindowGen> windows;
  std::vector<Slalom> neg_sets;
  std::vector<WindowGen> neg_windows;
};

const Slalom& exact(const Slalom& s) {
  if (!s.exact_tail()) throw std::invalid_argument("set generator with a rule tail");
  return s;
}

Parts split(const Conjunct& c) {
  Parts p{Slalom(0), {}, {}, {}};
  for (const auto& g : c.positives) {
    if (const auto* s = std::get_if<SetGen>(&g))
      p.u = unite(p.u, exact(s->a));
    else
      p.windows.push_back(std::get<WindowGen>(g));
  }
  for (const auto& g : c.negatives) {
    if (const auto* s = std::get_if<SetGen>(&g))
      p.neg_sets.push_back(exact(s->a));
    else
      p.neg_windows.push_back(std::get<WindowGen>(g));
  }
  return p;
}

// The longest window if all agree on their common levels.
std::optional<WindowGen> merge_windows(const std::vector<WindowGen>& ws) {
  WindowGen best(Slalom(0), 0);
  for (const auto& w : ws)
    if (w.level > best.level) best = w;
  for (const auto& w : ws)
    for (unsigned j = 0; j < w.level; ++j)
      if (!(w.trace[j] == best.trace[j])) return std::nullopt;
  return best;
}

bool agrees_below(const Slalom& a, const Slalom& b, unsigned n) {
  for (unsigned j = 0; j < n; ++j)
    if (!(a[j] == b[j])) return false;
  return true;
}

// Least level k at which B has a column the point can leave out: below n the
// trace is pinned to S, from n on it only has to contain U.
std::optional<unsigned> least_escape(const Slalom& b, const WindowGen& w, const Slalom& u, unsigned from = 0) {
  for (unsigned k = from; k < b.horizon(); ++k) {
    const LevelSet& floor = k < w.level ? w.trace[k] : u.at(k);
    if (!b[k].subset_of(floor)) return k;
  }
  return std::nullopt;
}

MeetVerdict verdict(MeetKind kind, std::string reason, std::optional<unsigned> bound = std::nullopt) {
  MeetVerdict v;
  v.kind = kind;
  v.reason = std::move(reason);
  v.bound = bound;
  return v;
}

OmegaPoint build_point(const WindowGen& w, const std::vector<LevelSet>& prefix, const Slalom& u, unsigned m) {
  std::vector<LevelSet> levels;
  for (unsigned j = 0; j < m; ++j) {
    if (j < w.level)
      levels.push_back(w.trace[j]);
    else if (j - w.level < prefix.size())
      levels.push_back(prefix[j - w.level]);
    else
      levels.push_back(u.at(j));
  }
  return OmegaPoint(Slalom(std::move(levels)), m);
}

// Search for a choice of T on [n, L) that leaves every live negated window
// and escapes every pending negated set generator.
class PrefixSearch {
 public:
  PrefixSearch(const Slalom& u, unsigned n, unsigned L, std::vector<WindowGen> live, std::vector<Slalom> pending)
      : u_(u), n_(n), L_(L), live_(std::move(live)), pending_(std::move(pending)) {
    if (live_.size() > 64 || pending_.size() > 64) throw std::invalid_argument("too many negated generators");
  }

  std::optional<std::vector<LevelSet>> run() {
    const std::uint64_t alive = live_.size() == 64 ? ~0ULL : (std::uint64_t{1} << live_.size()) - 1;
    std::vector<LevelSet> prefix;
    if (dfs(n_, alive, 0, prefix)) return prefix;
    return std::nullopt;
  }

 private:
  std::uint64_t all_escaped() const { return pending_.size() == 64 ? ~0ULL : (std::uint64_t{1} << pending_.size()) - 1; }

  std::vector<LevelSet> candidates(unsigned j, std::uint64_t alive, std::uint64_t escaped) const {
    const LevelSet base = u_.at(j);
    LevelSet r(j);
    for (std::size_t w = 0; w < live_.size(); ++w)
      if ((alive >> w & 1) && j < live_[w].level) r = r.united(live_[w].trace[j].minus(base));
    if (r.size() > 16) throw std::runtime_error("window case analysis too wide at level " + std::to_string(j));

    std::vector<LevelSet> out;
    const auto rc = r.columns();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rc.size()); ++mask) {
      std::vector<std::uint64_t> cols;
      for (std::size_t i = 0; i < rc.size(); ++i)
        if (mask >> i & 1) cols.push_back(rc[i]);
      LevelSet x = base.united(LevelSet(j, std::move(cols)));
      if (!x.saturated()) out.push_back(std::move(x));
    }
    // One column outside U ∪ R kills every live window. A column outside all
    // pending B(j) dominates the rest; without one, every outside column is
    // a member of some B(j), a finite explicit list.
    LevelSet blocked = base.united(r);
    LevelSet bcols(j);
    for (std::size_t b = 0; b < pending_.size(); ++b)
      if (!(escaped >> b & 1)) bcols = bcols.united(pending_[b].at(j));
    const auto free_col = blocked.united(bcols).least_missing();
    if (free_col) {
      LevelSet x = base.with(*free_col);
      if (!x.saturated()) out.push_back(std::move(x));
    } else {
      const LevelSet outside = bcols.minus(blocked);
      for (std::uint64_t c : outside.columns()) {
        LevelSet x = base.with(c);
        if (!x.saturated()) out.push_back(std::move(x));
      }
    }
    return out;
  }

  bool dfs(unsigned j, std::uint64_t alive, std::uint64_t escaped, std::vector<LevelSet>& prefix) {
    if (j == L_) return alive == 0 && escaped == all_escaped();
    if (failed_.count({j, alive, escaped})) return false;
    for (auto& x : candidates(j, alive, escaped)) {
      std::uint64_t a = alive, e = escaped;
      for (std::size_t w = 0; w < live_.size(); ++w)
        if ((a >> w & 1) && j < live_[w].level && !(live_[w].trace[j] == x)) a &= ~(std::uint64_t{1} << w);
      for (std::size_t b = 0; b < pending_.size(); ++b)
        if (!pending_[b].at(j).subset_of(x)) e |= std::uint64_t{1} << b;
      prefix.push_back(std::move(x));
      if (dfs(j + 1, a, e, prefix)) return true;
      prefix.pop_back();
    }
    failed_.insert({j, alive, escaped});
    return false;
  }

  const Slalom& u_;
  unsigned n_, L_;
  std::vector<WindowGen> live_;
  std::vector<Slalom> pending_;
  std::set<std::tuple<unsigned, std::uint64_t, std::uint64_t>> failed_;
};

}  // namespace

MeetVerdict meet_infinitude(const Conjunct& c) {
  const Parts parts = split(c);
  const Slalom& u = parts.u;
  const auto merged = merge_windows(parts.windows);
  if (!merged) return verdict(MeetKind::Empty, "positive windows disagree");
  const WindowGen w = *merged;
  const unsigned n = w.level;

  for (unsigned j = 0; j < n; ++j)
    if (!u.at(j).subset_of(w.trace[j]))
      return verdict(MeetKind::Empty, "set generators exceed the window trace at level " + std::to_string(j));

  std::vector<WindowGen> live;
  for (const auto& nw : parts.neg_windows) {
    if (nw.level <= n) {
      if (agrees_below(w.trace, nw.trace, nw.level))
        return verdict(MeetKind::Empty, "negated window contains the positive window");
      continue;
    }
    if (!agrees_below(w.trace, nw.trace, n)) continue;
    bool reachable = true;
    for (unsigned j = n; j < nw.level && reachable; ++j) reachable = u.at(j).subset_of(nw.trace[j]);
    if (reachable) live.push_back(nw);
  }

  std::vector<unsigned> escapes;
  for (std::size_t b = 0; b < parts.neg_sets.size(); ++b) {
    const auto k = least_escape(parts.neg_sets[b], w, u);
    if (!k) return verdict(MeetKind::Empty, "negated set generator " + std::to_string(b) + " lies inside every point");
    escapes.push_back(*k);
  }

  for (unsigned j = n; j < u.horizon(); ++j)
    if (u[j].saturated())
      return verdict(MeetKind::Finite, "union of set generators saturated at level " + std::to_string(j), j);

  if (live.empty()) {
    MeetVerdict v = verdict(MeetKind::Infinite, "no obstruction");
    v.from = n;
    for (unsigned k : escapes) v.from = std::max(v.from, k + 1);
    v.witness = [w, u, from = v.from](unsigned m) {
      if (m < from) throw std::out_of_range("witness requested below its first level");
      return build_point(w, {}, u, m);
    };
    return v;
  }

  unsigned L = 0;
  for (const auto& nw : live) L = std::max(L, nw.level);
  std::vector<Slalom> pending;
  unsigned from = L;
  for (const auto& b : parts.neg_sets) {
    const auto k = least_escape(b, w, u);
    if (*k < n) continue;
    if (const auto late = least_escape(b, w, u, L)) {
      from = std::max(from, *late + 1);
      continue;
    }
    pending.push_back(b);
  }
  auto prefix = PrefixSearch(u, n, L, live, pending).run();
  if (!prefix)
    return verdict(MeetKind::Finite, "every trace on levels " + std::to_string(n) + ".." + std::to_string(L - 1) +
                                         " falls into a negated window or generator", L - 1);
  MeetVerdict v = verdict(MeetKind::Infinite, "negated windows avoided below level " + std::to_string(L));
  v.from = from;
  v.witness = [w, u, from, pre = *prefix](unsigned m) {
    if (m < from) throw std::out_of_range("witness requested below its first level");
    return build_point(w, pre, u, m);
  };
  return v;
}

MeetVerdict meet_infinitude(const AlgebraTerm& t) {
  MeetVerdict best = verdict(MeetKind::Empty, "zero term");
  for (const auto& c : t.disjuncts) {
    MeetVerdict v = meet_infinitude(c);
    if (v.kind == MeetKind::Infinite) return v;
    if (v.kind == MeetKind::Finite && (best.kind == MeetKind::Empty || *v.bound > *best.bound)) best = v;
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

BigInt positive_count(const Slalom& u, const std::vector<WindowGen>& windows, unsigned m) {
  const auto w = merge_windows(windows);
  if (!w || m < w->level) return 0;
  for (unsigned j = 0; j < w->level; ++j)
    if (!u.at(j).subset_of(w->trace[j])) return 0;
  BigInt count = 1;
  for (unsigned j = w->level; j < m; ++j) {
    const std::uint64_t free = (std::uint64_t{1} << j) - u.at(j).size();
    if (free == 0) return 0;
    count *= power_of_two(static_cast<unsigned>(free)) - 1;
  }
  return count;
}

}  // namespace

BigInt point_count(const Conjunct& c, unsigned level) {
  const Parts parts = split(c);
  const std::size_t k = parts.neg_sets.size() + parts.neg_windows.size();
  if (k > 20) throw std::invalid_argument("more than 20 negated generators");
  BigInt total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Slalom u = parts.u;
    std::vector<WindowGen> ws = parts.windows;
    int sign = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mask >> i & 1)) continue;
      sign = -sign;
      if (i < parts.neg_sets.size())
        u = unite(u, parts.neg_sets[i]);
      else
        ws.push_back(parts.neg_windows[i - parts.neg_sets.size()]);
    }
    const BigInt term = positive_count(u, ws, level);
    if (sign > 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

BigInt point_count(const AlgebraTerm& t, unsigned level) {
  const std::size_t k = t.disjuncts.size();
  if (k > 16) throw std::invalid_argument("more than 16 disjuncts");
  BigInt total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    Conjunct c;
    int bits = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) {
        c = conjoin(c, t.disjuncts[i]);
        ++bits;
      }
    if (bits % 2)
      total += point_count(c, level);
    else
      total -= point_count(c, level);
  }
  return total;
}

BigInt point_count_upto(const Conjunct& c, unsigned depth) {
  BigInt total = 0;
  for (unsigned m = 0; m <= depth; ++m) total += point_count(c, m);
  return total;
}

}  // namespace slalomlab
