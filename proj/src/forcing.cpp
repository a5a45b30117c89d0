#include "slalomlab/forcing.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace slalomlab {

namespace {

std::uint64_t half(unsigned n) { return std::uint64_t{1} << (n - 1); }

// Number of columns of f in [lo, hi).
std::uint64_t count_in(const LevelSet& f, std::uint64_t lo, std::uint64_t hi) {
  const auto cols = f.columns();
  return static_cast<std::uint64_t>(std::lower_bound(cols.begin(), cols.end(), hi) -
                                    std::lower_bound(cols.begin(), cols.end(), lo));
}

bool has_lower(const LevelSet& f, unsigned n) { return count_in(f, 0, half(n)) == half(n); }
bool has_upper(const LevelSet& f, unsigned n) { return count_in(f, half(n), 2 * half(n)) == half(n); }

std::optional<std::uint64_t> least_outside(const LevelSet& f, std::uint64_t lo, std::uint64_t hi) {
  for (std::uint64_t c = lo; c < hi; ++c)
    if (!f.contains(c)) return c;
  return std::nullopt;
}

LevelSet all_but(unsigned n, std::uint64_t c) {
  std::vector<std::uint64_t> cols;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
    if (x != c) cols.push_back(x);
  return LevelSet(n, std::move(cols));
}

std::string key_of(const Slalom& trace, unsigned level) { return to_string(trace.prefix(level)) + "@" + std::to_string(level); }

}  // namespace

// The closed rules: p ≤ q iff n_p ≥ n_q, the traces agree below n_q and
// A_p ⊇ A_q. Canonical set parts copy the trace below the window, which
// folds the interval condition on [n_q, n_p) into A_p ⊇ A_q.
bool order_rules(const QCondition& p, const QCondition& q) {
  if (p.window.level < q.window.level) return false;
  for (unsigned j = 0; j < q.window.level; ++j)
    if (!(p.window.trace[j] == q.window.trace[j])) return false;
  const unsigned top = std::max(p.a.horizon(), q.a.horizon());
  for (unsigned j = 0; j < top; ++j)
    if (!q.a.at(j).subset_of(p.a.at(j))) return false;
  return true;
}

bool q_order(const QCondition& p, const QCondition& q) {
  if (!is_canonical(p) || !is_canonical(q)) throw std::invalid_argument("q_order needs canonical conditions");
  return order_rules(p, q);
}

int d(unsigned n, const LevelSet& f) {
  if (n < 2) throw std::invalid_argument("d_n is defined for n >= 2");
  if (f.level() != n) throw std::invalid_argument("column set is not at level " + std::to_string(n));
  return has_lower(f, n) ? 1 : 0;
}

std::pair<LevelSet, LevelSet> d_split(unsigned n, const LevelSet& f) {
  if (n < 2 || f.level() != n) throw std::invalid_argument("d_split needs a set at level n >= 2");
  if (f.size() >= half(n)) throw std::invalid_argument("d_split needs |F| < 2^(n-1)");
  const auto up = least_outside(f, half(n), 2 * half(n));
  const auto low = least_outside(f, 0, half(n));
  return {all_but(n, *up), all_but(n, *low)};
}

bool cohen_leq(const CohenCondition& tau, const CohenCondition& sigma) {
  for (const auto& [m, v] : sigma) {
    const auto it = tau.find(m);
    if (it == tau.end() || it->second != v) return false;
  }
  return true;
}

CohenCondition cohen_shortcut(const QCondition& p) {
  const unsigned n = p.window.level;
  if (n < 2) throw std::invalid_argument("projection is defined on window level > 1");
  CohenCondition out;
  for (unsigned m = 2; m < n; ++m) out[m] = d(m, p.window.trace[m]);
  for (unsigned m = n; m < p.a.horizon(); ++m) {
    if (has_lower(p.a[m], m))
      out[m] = 1;
    else if (has_upper(p.a[m], m))
      out[m] = 0;
  }
  return out;
}

namespace {

// Canonical extension of p whose trace at m is b (m ≥ n); window level m + 1.
QCondition extend_at(const QCondition& p, unsigned m, const LevelSet& b) {
  std::vector<LevelSet> trace;
  for (unsigned j = 0; j < m; ++j) trace.push_back(p.a.at(j));
  trace.push_back(b);
  Slalom a = p.a.resized(std::max(p.a.horizon(), m + 1));
  a.set_level(b);
  return canonicalize(a, WindowGen(Slalom(std::move(trace)), m + 1));
}

}  // namespace

CohenCondition cohen_project(const QCondition& p, unsigned search_depth, ProjectionOracle* stats) {
  const CohenCondition sigma = cohen_shortcut(p);
  const unsigned n = p.window.level;
  for (unsigned m = 2; m < search_depth; ++m) {
    // d is monotone, so A(m) itself and the maximal supersets cover every
    // value an extension can take at m.
    std::vector<LevelSet> candidates;
    const LevelSet am = p.a.at(m);
    if (m < n) {
      candidates.push_back(p.window.trace[m]);
    } else {
      candidates.push_back(am);
      for (std::uint64_t c = 0; c < am.capacity(); ++c)
        if (!am.contains(c)) candidates.push_back(all_but(m, c));
    }
    std::set<int> values;
    for (const auto& b : candidates) {
      const QCondition q = m < n ? extend_at(p, n, p.a.at(n)) : extend_at(p, m, b);
      if (stats) ++stats->extensions;
      if (!order_rules(q, p)) throw std::logic_error("extension at m = " + std::to_string(m) + " is not below p");
      values.insert(d(m, q.window.trace[m]));
    }
    const auto it = sigma.find(m);
    const bool forced = values.size() == 1;
    if (forced != (it != sigma.end()) || (forced && it->second != *values.begin()))
      throw std::logic_error("shortcut disagrees with the extension oracle at m = " + std::to_string(m));
  }
  return sigma;
}

std::vector<QCondition> condition_universe(unsigned lo, unsigned hi, unsigned a_top) {
  if (lo == 0 || hi > 8 || a_top > 10) throw std::invalid_argument("condition universe out of range");
  // Per-level trace representatives.
  std::vector<std::vector<LevelSet>> reps(hi);
  for (unsigned j = 0; j < hi; ++j) {
    const std::uint64_t size = std::uint64_t{1} << j;
    std::set<LevelSet> r{LevelSet(j)};
    if (j > 0) {
      const std::uint64_t h = size / 2;
      r.insert(LevelSet::interval(j, 0, h));
      r.insert(LevelSet::interval(j, h, size));
      std::vector<std::uint64_t> gap;
      for (std::uint64_t c = 1; c < size; ++c)
        if (c != h) gap.push_back(c);
      r.insert(LevelSet(j, gap));
      r.insert(LevelSet::interval(j, 1, size));
      r.insert(LevelSet::interval(j, 0, size - 1));
    }
    for (const auto& x : r)
      if (!x.saturated()) reps[j].push_back(x);
  }
  std::vector<QCondition> out;
  for (unsigned n = lo; n <= hi; ++n) {
    std::vector<LevelSet> trace(n);
    std::function<void(unsigned)> traces = [&](unsigned j) {
      if (j < n) {
        for (const auto& x : reps[j]) {
          trace[j] = x;
          traces(j + 1);
        }
        return;
      }
      std::vector<LevelSet> a = trace;
      std::function<void(unsigned)> sets = [&](unsigned k) {
        if (k >= a_top) {
          if (a.size() > n && a[n].size() + 1 >= a[n].capacity()) return;
          out.push_back({Slalom(a), WindowGen(Slalom(trace), n)});
          return;
        }
        const std::uint64_t size = std::uint64_t{1} << k;
        for (const LevelSet& x : {LevelSet(k), LevelSet::interval(k, 0, size / 2), LevelSet::interval(k, size / 2, size)}) {
          a.push_back(x);
          sets(k + 1);
          a.pop_back();
        }
      };
      sets(n);
    };
    traces(0);
  }
  return out;
}

QCondition lift(const QCondition& p, const CohenCondition& sigma, const CohenCondition& tau) {
  if (!cohen_leq(tau, sigma)) throw std::invalid_argument("tau does not extend sigma");
  const unsigned n = p.window.level;
  unsigned top = p.a.horizon();
  for (const auto& [k, v] : tau) top = std::max(top, k + 1);
  Slalom b = p.a.resized(top);
  for (const auto& [k, v] : tau) {
    if (sigma.count(k)) continue;
    if (k < n) throw std::invalid_argument("new entry below the window level");
    const LevelSet ak = b.at(k);
    const std::uint64_t h = half(k);
    // Missing an upper column forces 1, missing a lower one forces 0.
    const auto c = v == 1 ? least_outside(ak, h, 2 * h) : least_outside(ak, 0, h);
    if (!c) throw std::logic_error("no column left to drop at level " + std::to_string(k));
    b.set_level(all_but(k, *c));
  }
  unsigned m = n;
  while (tau.count(m)) ++m;
  std::vector<LevelSet> trace;
  for (unsigned j = 0; j < m; ++j) trace.push_back(j < n ? p.window.trace[j] : b.at(j));
  return canonicalize(b, WindowGen(Slalom(std::move(trace)), m));
}

namespace {

// Every partial function on [lo, hi) → {0,1}, extending `base`.
void each_extension(const CohenCondition& base, unsigned lo, unsigned hi,
                    const std::function<void(const CohenCondition&)>& f) {
  CohenCondition cur = base;
  std::function<void(unsigned)> walk = [&](unsigned m) {
    if (m >= hi) {
      f(cur);
      return;
    }
    if (base.count(m)) {
      walk(m + 1);
      return;
    }
    walk(m + 1);
    for (int v : {0, 1}) {
      cur[m] = v;
      walk(m + 1);
    }
    cur.erase(m);
  };
  walk(lo);
}

std::string show(const CohenCondition& c) {
  std::string s = "{";
  for (const auto& [m, v] : c) s += (s.size() > 1 ? "," : "") + std::to_string(m) + ":" + std::to_string(v);
  return s + "}";
}

}  // namespace

ProjectionReport verify_projection(unsigned depth) {
  if (depth < 2 || depth > 6) throw std::invalid_argument("projection depth must be in [2, 6]");
  ProjectionReport rep;
  auto note = [&](const std::string& s) {
    if (rep.failures.size() < 20) rep.failures.push_back(s);
  };
  const unsigned top = depth + 1;  // Cohen domains ⊆ [2, top)
  const auto universe = condition_universe(2, depth, top);
  rep.conditions = universe.size();
  ProjectionOracle stats;
  std::vector<CohenCondition> image;
  std::map<std::string, std::vector<std::size_t>> by_window;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    image.push_back(cohen_project(universe[i], top, &stats));
    by_window[key_of(universe[i].window.trace, universe[i].window.level)].push_back(i);
  }

  // (1) density, and exact hits.
  std::set<CohenCondition> hit(image.begin(), image.end());
  each_extension({}, 2, top, [&](const CohenCondition& tau) {
    ++rep.cohen_conditions;
    if (hit.count(tau)) ++rep.exact_hits;
    const bool dense = std::any_of(image.begin(), image.end(), [&](const CohenCondition& s) { return cohen_leq(s, tau); });
    if (!dense) note("no condition projects below " + show(tau));
  });

  // (2) order preservation over related pairs, found through window prefixes.
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const auto& p = universe[i];
    for (unsigned l = 2; l <= p.window.level; ++l) {
      const auto it = by_window.find(key_of(p.window.trace, l));
      if (it == by_window.end()) continue;
      for (std::size_t j : it->second) {
        if (!order_rules(p, universe[j])) continue;
        ++rep.order_pairs;
        if (!cohen_leq(image[i], image[j])) note("order not preserved: " + show(image[i]) + " vs " + show(image[j]));
      }
    }
  }

  // (3) lifting: every τ ≤ Φ(p) with domain in [2, top) is Φ of some q ≤ p.
  for (std::size_t i = 0; i < universe.size(); ++i) {
    const auto& p = universe[i];
    each_extension(image[i], 2, top, [&](const CohenCondition& tau) {
      const QCondition q = lift(p, image[i], tau);
      ++rep.lifts;
      const CohenCondition got = cohen_project(q, top, &stats);
      if (got != tau) note("lift of " + show(tau) + " projects to " + show(got));
      if (!order_rules(q, p)) note("lift of " + show(tau) + " is not below p");
    });
  }
  rep.oracle_extensions = stats.extensions;
  return rep;
}

bool MathiasCondition::in_f(std::uint64_t x) const {
  if (x < (std::uint64_t{1} << n)) return false;
  const auto [level, col] = enum_bijection_inverse(x);
  return !excluded.at(level).contains(col);
}

bool MathiasCondition::interval_hitting(unsigned upto) const {
  for (unsigned j = 0; j < upto; ++j) {
    const std::uint64_t lo = std::uint64_t{1} << j, hi = lo << 1;
    const bool s_hit = std::lower_bound(s.begin(), s.end(), lo) != std::lower_bound(s.begin(), s.end(), hi);
    const bool f_hit = j >= n && !excluded.at(j).saturated();
    if (!s_hit && !f_hit) return false;
  }
  return true;
}

std::string MathiasCondition::str() const {
  std::string out = "s={";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  out += "}; F=[" + std::to_string(std::uint64_t{1} << n) + ",inf)";
  std::string minus;
  for (unsigned j = n; j < excluded.horizon(); ++j)
    for (auto c : excluded[j].columns()) minus += (minus.empty() ? "" : ",") + std::to_string(enum_bijection(j, c));
  return minus.empty() ? out : out + " minus {" + minus + "}";
}

MathiasCondition mathias_embed(const QCondition& p) {
  if (!is_canonical(p)) throw std::invalid_argument("mathias_embed needs a canonical condition");
  MathiasCondition m;
  m.n = p.window.level;
  m.s.push_back(0);  // 0 is outside the range of the enumeration
  for (unsigned j = 0; j < m.n; ++j)
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
      if (!p.window.trace[j].contains(c)) m.s.push_back(enum_bijection(j, c));
  m.excluded = Slalom(std::max(p.a.horizon(), m.n));
  for (unsigned j = m.n; j < p.a.horizon(); ++j) m.excluded.set_level(p.a[j]);
  return m;
}

bool mathias_leq(const MathiasCondition& lower, const MathiasCondition& upper) {
  if (!std::includes(lower.s.begin(), lower.s.end(), upper.s.begin(), upper.s.end())) return false;
  for (auto x : lower.s)
    if (!std::binary_search(upper.s.begin(), upper.s.end(), x) && !upper.in_f(x)) return false;
  // F' ⊆ F level by level; past every horizon both are full levels from max(n, n') on.
  const unsigned top = std::max({lower.n, upper.n, lower.excluded.horizon(), upper.excluded.horizon()}) + 1;
  for (unsigned j = 0; j < top; ++j) {
    if (j < lower.n) continue;  // F' is empty here
    if (j < upper.n) return false;
    if (!upper.excluded.at(j).subset_of(lower.excluded.at(j))) return false;
  }
  return true;
}

MathiasReport mathias_order_check(unsigned depth) {
  if (depth < 1 || depth > 5) throw std::invalid_argument("mathias depth must be in [1, 5]");
  MathiasReport rep;
  auto note = [&](const std::string& s) {
    if (rep.failures.size() < 20) rep.failures.push_back(s);
  };
  const auto universe = condition_universe(1, depth, depth + 1);
  rep.conditions = universe.size();
  std::vector<MathiasCondition> image;
  std::set<std::string> seen;
  for (const auto& p : universe) {
    image.push_back(mathias_embed(p));
    const auto& m = image.back();
    if (!seen.insert(m.str()).second) note("embedding not injective at " + m.str());
    if (!m.interval_hitting(depth + 2)) note("interval condition fails for " + m.str());
    if (!m.s.empty() && m.s.back() >= (std::uint64_t{1} << m.n)) note("s leaves 2^n for " + m.str());
    std::uint64_t block = 0;
    for (std::uint64_t x = std::uint64_t{1} << m.n; x < (std::uint64_t{2} << m.n); ++x) block += m.in_f(x);
    if (block <= 1) note("F meets the first block at most once for " + m.str());
    if (classify(m.excluded, Ideal::J).status != Status::Yes) note("complement of F is not in J for " + m.str());
  }
  for (std::size_t i = 0; i < universe.size(); ++i)
    for (std::size_t j = 0; j < universe.size(); ++j) {
      ++rep.pairs;
      const bool q = order_rules(universe[i], universe[j]);
      rep.related += q;
      if (q != mathias_leq(image[i], image[j]))
        note("orders disagree: " + image[i].str() + " vs " + image[j].str());
    }
  return rep;
}

}  // namespace slalomlab
