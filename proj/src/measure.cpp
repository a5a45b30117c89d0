#include "slalomlab/measure.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace slalomlab {

namespace {

std::optional<WindowGen> merged(const std::vector<WindowGen>& ws) {
  const WindowGen* best = nullptr;
  for (const auto& w : ws)
    if (!best || w.level > best->level) best = &w;
  if (!best) return WindowGen(Slalom(0), 0);
  for (const auto& w : ws)
    for (unsigned j = 0; j < w.level; ++j)
      if (!(w.trace[j] == best->trace[j])) return std::nullopt;
  return *best;
}

// λ[u ⊆ name ∧ name agrees with every window], level by level.
Rational positive_measure(const Slalom& u, const std::vector<WindowGen>& windows, const SlalomName& name,
                          unsigned upto = ~0u) {
  const auto w = merged(windows);
  if (!w) return 0;
  const unsigned top = std::min(upto, std::max({u.horizon(), w->level, name.level}));
  Rational p = 1;
  for (unsigned j = 0; j < top; ++j) {
    const LevelSet uj = u.at(j);
    if (j < name.level) {
      const LevelSet& tj = name.trace[j];
      if (!uj.subset_of(tj) || (j < w->level && !(tj == w->trace[j]))) return 0;
    } else if (j < w->level) {
      const LevelSet& sj = w->trace[j];
      if (sj.size() + 1 != sj.capacity() || !uj.subset_of(sj)) return 0;
      p *= inverse_power_of_two(j);
    } else {
      p *= 1 - uj.density();
    }
    if (p == 0) return 0;
  }
  return p;
}

Rational signed_sum(std::size_t k, const std::function<Rational(std::uint64_t)>& f) {
  if (k > 20) throw std::invalid_argument("more than 20 negated terms");
  Rational total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    const Rational v = f(mask);
    if (std::popcount(mask) % 2)
      total -= v;
    else
      total += v;
  }
  return total;
}

}  // namespace

Rational level_factor(const Slalom& w, unsigned n) {
  if (n == 0) throw std::invalid_argument("level_factor is defined for n >= 1");
  return 1 - w.at(n).density();
}

MeasureValue containment_measure(const Slalom& w, const SlalomName& name) {
  if (w.exact_tail()) return MeasureValue::exact(positive_measure(w, {}, name));
  const Rational value = positive_measure(w, {}, name, w.horizon());
  if (name.level > w.horizon()) return {value, 0, value};
  // ∏(1 − x_i) ≥ 1 − Σ x_i over the tail levels.
  const Rational rest = 1 - *w.tail_sum_bound();
  return {value, rest > 0 ? value * rest : Rational(0), value};
}

MeasureValue term_measure(const std::vector<Slalom>& positives, const std::vector<Slalom>& negatives,
                          const SlalomName& name) {
  Slalom u(0);
  for (const auto& s : positives) u = unite(u, s);
  const Rational v = signed_sum(negatives.size(), [&](std::uint64_t mask) {
    Slalom x = u;
    for (std::size_t i = 0; i < negatives.size(); ++i)
      if (mask >> i & 1) x = unite(x, negatives[i]);
    return containment_measure(x, name).value;
  });
  return MeasureValue::exact(v);
}

Rational nu(const SlalomName& name, const Conjunct& c) {
  Slalom u(0);
  std::vector<WindowGen> ws;
  for (const auto& g : c.positives) {
    if (const auto* s = std::get_if<SetGen>(&g))
      u = unite(u, s->a);
    else
      ws.push_back(std::get<WindowGen>(g));
  }
  return signed_sum(c.negatives.size(), [&](std::uint64_t mask) {
    Slalom x = u;
    std::vector<WindowGen> y = ws;
    for (std::size_t i = 0; i < c.negatives.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      if (const auto* s = std::get_if<SetGen>(&c.negatives[i]))
        x = unite(x, s->a);
      else
        y.push_back(std::get<WindowGen>(c.negatives[i]));
    }
    return positive_measure(x, y, name);
  });
}

Rational nu(const SlalomName& name, const AlgebraTerm& t) {
  const std::size_t k = t.disjuncts.size();
  if (k > 16) throw std::invalid_argument("more than 16 disjuncts");
  Rational total = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    Conjunct c;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) c = conjoin(c, t.disjuncts[i]);
    if (std::popcount(mask) % 2)
      total += nu(name, c);
    else
      total -= nu(name, c);
  }
  return total;
}

// ---------------------------------------------------------------------------

std::vector<DeltaRow> delta_compare(const Slalom& w, const std::vector<OmegaPoint>& points) {
  std::vector<DeltaRow> out;
  for (const auto& p : points) {
    DeltaRow r{p, member(SetGen{w}, p), containment_measure(w, SlalomName::windowed(p)).value,
               borel_cantelli_bound(w, p.level), false};
    r.ok = r.in_tw ? (1 - r.nu <= r.tail_bound) : (r.nu == 0);
    out.push_back(std::move(r));
  }
  return out;
}

ConvergeReport converge_sweep(const Slalom& w, unsigned depth, unsigned samples, std::uint64_t seed) {
  if (!w.exact_tail()) throw std::invalid_argument("converge_sweep needs an exact tail");
  if (classify(w, Ideal::W).status != Status::Yes) throw std::invalid_argument("converge_sweep needs w in W");
  ConvergeReport rep;
  auto note = [&](const std::string& s) {
    if (rep.failures.size() < 20) rep.failures.push_back(s);
  };

  for_each_point(std::min(depth, kEnumCap), [&](const OmegaPoint& p) {
    ++rep.explicit_points;
    const auto row = delta_compare(w, {p}).front();
    if (!row.ok) note("point at level " + std::to_string(p.level) + " violates the bound");
    return true;
  });

  Rng rng(seed);
  const Conjunct tw{{SetGen{w}}, {}};
  for (unsigned m = 0; m <= depth; ++m) {
    ConvergeLevel lv;
    lv.level = m;
    lv.in_count = point_count(tw, m);
    lv.out_count = point_count(Conjunct{}, m) - lv.in_count;
    lv.tail_bound = borel_cantelli_bound(w, m);

    // Class representatives: the trace w below m, and a trace emptied at the
    // first level where w has members.
    std::vector<LevelSet> in_levels, out_levels;
    std::optional<unsigned> first;
    for (unsigned j = 0; j < m; ++j) {
      in_levels.push_back(w.at(j));
      if (!first && !w.at(j).empty()) first = j;
    }
    if (lv.in_count > 0) {
      const OmegaPoint rep_in(Slalom(in_levels), m);
      lv.nu_in = containment_measure(w, SlalomName::windowed(rep_in)).value;
    }
    if (first) {
      out_levels = in_levels;
      out_levels[*first] = LevelSet(*first);
      lv.nu_out = containment_measure(w, SlalomName::windowed(OmegaPoint(Slalom(out_levels), m))).value;
    }
    lv.ok = (lv.in_count == 0 || 1 - lv.nu_in <= lv.tail_bound) && (lv.out_count == 0 || lv.nu_out == 0) &&
            (lv.out_count == 0) == !first;

    if (m > kEnumCap) {
      for (unsigned s = 0; s < samples; ++s) {
        std::vector<LevelSet> levels;
        for (unsigned j = 0; j < m; ++j) {
          std::vector<std::uint64_t> cols;
          for (std::uint64_t c = 0; c < (std::uint64_t{1} << j); ++c)
            if (rng.coin()) cols.push_back(c);
          LevelSet x(j, std::move(cols));
          if (s % 2 == 0) x = x.united(w.at(j));
          while (x.saturated()) x = x.minus(LevelSet(j, {rng.below(x.capacity())}));
          levels.push_back(std::move(x));
        }
        const auto row = delta_compare(w, {OmegaPoint(Slalom(std::move(levels)), m)}).front();
        ++rep.sampled_points;
        const Rational& expect = row.in_tw ? lv.nu_in : lv.nu_out;
        if (!row.ok || row.nu != expect) note("sampled point at level " + std::to_string(m) + " off its class value");
      }
    }
    if (!lv.ok) note("class bound fails at level " + std::to_string(m));
    rep.levels.push_back(std::move(lv));
  }
  return rep;
}

MuValue mu(const AlgebraTerm& t, unsigned K) {
  MuValue out;
  OmegaCursor cur;
  Rational sum = 0, weight = make_rational(1, 2);
  for (unsigned i = 0; i < K; ++i) {
    const OmegaPoint p = cur.next();
    sum += weight * nu(SlalomName::windowed(p), t);
    weight /= 2;
  }
  out.summands = K;
  const bool finite = meet_infinitude(t).kind != MeetKind::Infinite;
  // Each summand measure vanishes on finite sets, so a finite term has no tail.
  out.value = {sum, sum, finite ? sum : sum + inverse_power_of_two(K)};
  out.strictly_positive = sum > 0;
  return out;
}

DestructCert destructibility_certificate(const Slalom& w, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
  const auto s = classify(w, Ideal::W);
  if (s.status != Status::Yes) throw std::domain_error("not in W: " + s.certificate);
  for (unsigned n = 0;; ++n) {
    const Rational tail = borel_cantelli_bound(w, n + 1);
    if (tail < eps) return {n, tail};
    if (n > w.horizon() + 64) throw std::domain_error("tail sum never drops below epsilon");
  }
}

Rational borel_cantelli_bound(const Slalom& w, unsigned m) {
  Rational sum = w.partial_sum(m);
  if (w.exact_tail()) return sum;
  // Rule tail: the closed form covers levels >= H.
  const unsigned first = w.rule()->first_level;
  if (m <= w.horizon()) return sum + *w.tail_sum_bound();
  const unsigned gap_end = std::max(first, m);
  Rational bound = first > m ? Rational(first - m) : Rational(0);
  Rational lead = 1;
  for (unsigned k = 0; k < gap_end - first + 1; ++k) lead *= w.rule()->ratio;
  return bound + lead / (1 - w.rule()->ratio);
}

MajorityResult majority_extract(const std::map<std::pair<unsigned, std::uint64_t>, Rational>& values,
                                unsigned horizon, const std::function<BigInt(unsigned)>& g) {
  MajorityResult out{Slalom(horizon), true, true, {}};
  for (const auto& [key, v] : values) {
    if (key.first == 0 || key.first >= horizon || key.second >= (std::uint64_t{1} << key.first))
      throw std::invalid_argument("value table entry out of range");
    if (v < 0 || v > 1) throw std::invalid_argument("value table entry outside [0,1]");
  }
  for (unsigned n = 1; n < horizon; ++n) {
    const BigInt gn = g(n);
    if (gn <= 0) throw std::invalid_argument("g(n) must be positive");
    Rational threshold(power_of_two(n), gn);
    threshold.canonicalize();
    Rational total = 0;
    std::vector<std::uint64_t> cols;
    for (auto it = values.lower_bound({n, 0}); it != values.end() && it->first.first == n; ++it) {
      total += it->second;
      if (it->second > threshold) cols.push_back(it->first.second);
    }
    if (total > Rational(power_of_two(n) - 1)) {
      out.budget_ok = false;
      out.violations.push_back("level " + std::to_string(n) + " values exceed the budget 2^n - 1");
    }
    out.a.set_level(LevelSet(n, std::move(cols)));
    if (BigInt(static_cast<unsigned long>(out.a[n].size())) >= gn) {
      out.size_ok = false;
      out.violations.push_back("level " + std::to_string(n) + " extracted set reaches g(n)");
    }
  }
  return out;
}

}  // namespace slalomlab
