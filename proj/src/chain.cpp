#include "slalomlab/chain.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace slalomlab {

bool is_centered(const std::vector<AlgebraTerm>& terms) {
  AlgebraTerm t = AlgebraTerm::one();
  for (const auto& x : terms) t = conjoin(t, x);
  return meet_infinitude(t).kind == MeetKind::Infinite;
}

std::optional<SaturationWitness> saturation_witness(const std::vector<Slalom>& family) {
  unsigned top = 0;
  for (const auto& s : family) {
    if (!s.exact_tail()) throw std::invalid_argument("saturation_witness needs exact tails");
    top = std::max(top, s.horizon());
  }
  for (unsigned j = 0; j < top; ++j) {
    LevelSet u(j);
    for (const auto& s : family) u = u.united(s.at(j));
    if (!u.saturated()) continue;
    std::set<std::size_t> idx;
    for (std::uint64_t c = 0; c < u.capacity(); ++c)
      for (std::size_t i = 0; i < family.size(); ++i)
        if (family[i].at(j).contains(c)) {
          idx.insert(i);
          break;
        }
    return SaturationWitness{j, {idx.begin(), idx.end()}};
  }
  return std::nullopt;
}

Rational kelley_number(const std::vector<AlgebraTerm>& terms, unsigned max_len) {
  const std::size_t t = terms.size();
  if (t == 0 || max_len == 0) throw std::invalid_argument("kelley_number needs terms and a positive length");
  if (t > 12) throw std::invalid_argument("kelley_number supports at most 12 terms");
  std::vector<char> centered(std::size_t{1} << t, 0);
  for (std::size_t mask = 1; mask < centered.size(); ++mask) {
    std::vector<AlgebraTerm> sub;
    for (std::size_t i = 0; i < t; ++i)
      if (mask >> i & 1) sub.push_back(terms[i]);
    centered[mask] = is_centered(sub);
  }
  for (std::size_t i = 0; i < t; ++i)
    if (!centered[std::size_t{1} << i]) throw std::domain_error("term " + std::to_string(i) + " is finite");

  Rational best = 1;
  std::vector<unsigned> counts(t, 0);
  std::function<void(std::size_t, unsigned)> walk = [&](std::size_t i, unsigned used) {
    if (i == t) {
      if (used == 0) return;
      std::size_t support = 0;
      for (std::size_t k = 0; k < t; ++k)
        if (counts[k]) support |= std::size_t{1} << k;
      unsigned top = 0;
      // Submasks of the support, centered ones only.
      for (std::size_t m = support; m; m = (m - 1) & support) {
        if (!centered[m]) continue;
        unsigned w = 0;
        for (std::size_t k = 0; k < t; ++k)
          if (m >> k & 1) w += counts[k];
        top = std::max(top, w);
      }
      best = std::min(best, make_rational(top, used));
      return;
    }
    for (unsigned c = 0; used + c <= max_len; ++c) {
      counts[i] = c;
      walk(i + 1, used + c);
    }
    counts[i] = 0;
  };
  walk(0, 0);
  return best;
}

std::string BucketKey::str() const {
  return "k=" + std::to_string(cutoff) + "|" + to_string(prefix) + "|" + to_fraction_string(threshold);
}

unsigned density_cutoff(const Slalom& s, const Rational& threshold) {
  if (!s.exact_tail()) throw std::invalid_argument("density_cutoff needs an exact tail");
  if (threshold <= 0) throw std::invalid_argument("threshold must be positive");
  unsigned k = 1;
  for (unsigned j = s.horizon(); j-- > 1;)
    if (s[j].density() >= threshold) {
      k = j + 1;
      break;
    }
  return k;
}

BucketKey bucket_key(const Slalom& s, const Rational& threshold) {
  const unsigned k = density_cutoff(s, threshold);
  return {k, s.resized(std::max(k, s.horizon())).prefix(k), threshold};
}

namespace {

void for_each_combination(std::size_t n, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

LinkedPartition linked_partition(const std::vector<Slalom>& family, unsigned n) {
  if (n < 2) throw std::invalid_argument("arity must be at least 2");
  LinkedPartition out;
  out.arity = n;
  const Rational threshold = make_rational(1, n);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto z = classify(family[i], Ideal::Z);
    if (z.status != Status::Yes) throw std::domain_error("member " + std::to_string(i) + " is not in Z: " + z.certificate);
    out.keys.push_back(bucket_key(family[i], threshold));
    out.buckets[out.keys.back().str()].push_back(i);
  }
  for (const auto& [key, members] : out.buckets) {
    // S is closed downward, so unions of exactly min(n, |bucket|) members suffice.
    const std::size_t r = std::min<std::size_t>(n, members.size());
    for_each_combination(members.size(), r, [&](const std::vector<std::size_t>& pick) {
      ++out.subsets_checked;
      Slalom u(0);
      for (auto p : pick) u = unite(u, family[members[p]]);
      const auto v = classify(u, Ideal::S);
      if (v.status != Status::Yes && out.failures.size() < 20)
        out.failures.push_back("bucket " + key + ": union leaves S (" + v.certificate + ")");
    });
  }
  return out;
}

namespace {

Rational third_power(unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r /= 3;
  return r;
}

std::string at_level(const std::string& what, unsigned j) { return what + " at level " + std::to_string(j); }

}  // namespace

StarResult star_refine(const std::vector<Slalom>& bucket, unsigned horizon) {
  if (bucket.empty()) throw std::invalid_argument("star_refine needs a nonempty bucket");
  const Rational ninth = make_rational(1, 9), third = make_rational(1, 3);
  StarResult out;
  unsigned L = horizon;
  for (const auto& s : bucket) {
    out.k = std::max(out.k, density_cutoff(s, ninth));
    L = std::max(L, s.horizon());
  }
  for (std::size_t i = 1; i < bucket.size(); ++i)
    for (unsigned j = 0; j < out.k; ++j)
      if (!(bucket[i].at(j) == bucket[0].at(j)))
        throw std::invalid_argument(at_level("bucket members disagree below the cutoff", j));
  auto lvl = [&](std::size_t m, unsigned j) { return bucket[m].at(j); };
  auto note = [&](const std::string& s) {
    if (out.failures.size() < 20) out.failures.push_back(s);
  };

  std::vector<std::size_t> q(bucket.size());
  std::iota(q.begin(), q.end(), 0);
  std::size_t n = 0;
  unsigned k = out.k;
  for (unsigned i = 0;; ++i) {
    const Rational bound = third_power(i + 1);
    unsigned k_next = k + 1;
    for (unsigned j = L; j-- > k;)
      if (lvl(n, j).density() >= bound) {
        k_next = std::max(k_next, j + 1);
        break;
      }

    // Greedy block: S_n first, then the members of Q_i in index order.
    std::vector<LevelSet> block;
    for (unsigned j = k; j < k_next; ++j) block.push_back(lvl(n, j));
    for (std::size_t m : q) {
      std::vector<LevelSet> trial = block;
      bool fits = true;
      for (unsigned j = k; j < k_next && fits; ++j) {
        trial[j - k] = trial[j - k].united(lvl(m, j));
        fits = trial[j - k].density() < third;
      }
      if (fits) block = std::move(trial);
    }
    Slalom t(k_next);
    for (auto& x : block) t.set_level(std::move(x));

    std::vector<std::size_t> q_next;
    for (std::size_t m : q) {
      bool covered = true;
      for (unsigned j = k; j < k_next && covered; ++j) covered = lvl(m, j).subset_of(t[j]);
      if (covered) q_next.push_back(m);
    }

    // Conditions (1) through (6).
    if (k_next <= k) note("k does not increase at step " + std::to_string(i));
    for (unsigned j = 0; j < k_next; ++j) {
      if (j < k && !t[j].empty()) note(at_level("block leaves its interval", j));
      if (t[j].density() >= third) note(at_level("block density reaches 1/3", j));
    }
    if (!std::includes(q.begin(), q.end(), q_next.begin(), q_next.end())) note("Q grows at step " + std::to_string(i));
    if (!std::binary_search(q_next.begin(), q_next.end(), n)) note("n_i dropped from Q at step " + std::to_string(i));
    for (std::size_t l : q_next)
      for (unsigned j = k; j < k_next; ++j)
        if (!lvl(l, j).subset_of(t[j])) note(at_level("member " + std::to_string(l) + " escapes the block", j));
    for (unsigned j = k_next; j < L; ++j)
      if (lvl(n, j).density() >= bound) note(at_level("chosen member too dense", j));

    out.chosen.push_back(n);
    out.steps.push_back({n, k, k_next, std::move(t), q_next});
    const auto it = std::upper_bound(q_next.begin(), q_next.end(), n);
    if (it == q_next.end()) break;
    n = *it;
    k = k_next;
    q = std::move(q_next);
  }

  out.v = Slalom(L);
  for (std::size_t m : out.chosen) out.v = unite(out.v, bucket[m].resized(L));
  if (bucket.size() >= 2 && out.chosen.size() < 2) note("refinement chose a single member");
  for (unsigned j = 0; j < L; ++j) {
    if (out.v.at(j).saturated()) note(at_level("union saturates", j));
    if (j < out.k) continue;
    // Split the union at j into the current block and the earlier choices.
    std::size_t cur = 0;
    while (cur + 1 < out.steps.size() && out.steps[cur + 1].k <= j) ++cur;
    const bool past = j >= out.steps.back().k_next;
    LevelSet recent(j);
    Rational history = 0, allowance = 0;
    for (std::size_t m = 0; m < out.steps.size(); ++m) {
      const LevelSet x = lvl(out.steps[m].n, j);
      if (!past && m >= cur) {
        recent = recent.united(x);
      } else {
        history += x.density();
        allowance += third_power(m + 1);
        if (x.density() >= third_power(m + 1)) note(at_level("history term over its share", j));
      }
    }
    if (recent.density() >= third) note(at_level("recent part reaches 1/3", j));
    if (allowance > 0 && history >= allowance) note(at_level("history exceeds its allowance", j));
    if (recent.density() + history >= 1) note(at_level("three-part bound fails", j));
  }
  return out;
}

DiagonalWitness diagonal_witness(const std::vector<Slalom>& class_unions) {
  std::vector<std::uint64_t> f;
  std::vector<unsigned> levels;
  for (unsigned n = 0; n < class_unions.size(); ++n) {
    const auto miss = class_unions[n].at(n).least_missing();
    if (!miss) throw std::domain_error("class union " + std::to_string(n) + " is saturated at level " + std::to_string(n));
    f.push_back(*miss);
    levels.push_back(n);
  }
  return {PathReal(std::move(f)), std::move(levels)};
}

bool CenteredDecomposition::ok() const {
  return std::all_of(classes.begin(), classes.end(), [](const CenteredClass& c) { return c.centered; });
}

CenteredDecomposition centered_decomposition(const Slalom& bound, const std::vector<Slalom>& family,
                                             const std::vector<WindowGen>& windows) {
  if (!in_slaloms(bound)) throw std::invalid_argument("bound is not in S");
  for (std::size_t i = 0; i < family.size(); ++i) {
    const unsigned top = std::max(family[i].horizon(), bound.horizon());
    for (unsigned j = 0; j < top; ++j)
      if (!family[i].at(j).subset_of(bound.at(j)))
        throw std::invalid_argument(at_level("member " + std::to_string(i) + " leaves the bound", j));
  }
  CenteredDecomposition out;
  for (const auto& w : windows) {
    if (meet_infinitude(Conjunct{{SetGen{bound}, w}, {}}).kind != MeetKind::Infinite)
      throw std::invalid_argument("window of level " + std::to_string(w.level) + " meets the bound finitely");
    CenteredClass c{w, {}, false};
    std::vector<AlgebraTerm> terms{AlgebraTerm::atom(w)};
    for (std::size_t i = 0; i < family.size(); ++i) {
      c.members.push_back(i);
      terms.push_back(AlgebraTerm::atom(SetGen{family[i]}));
    }
    c.centered = is_centered(terms);
    out.classes.push_back(std::move(c));
  }
  return out;
}

}  // namespace slalomlab
