#include "slalomlab/constructions.hpp"

#include <algorithm>
#include <stdexcept>

namespace slalomlab {

namespace {

Slalom restrict_levels(const Slalom& s, unsigned lo, unsigned hi, unsigned horizon) {
  Slalom out(horizon);
  for (unsigned j = lo; j < std::min(hi, horizon); ++j) out.set_level(s.at(j));
  return out;
}

std::string lvl(const std::string& what, unsigned j) { return what + " at level " + std::to_string(j); }

}  // namespace

ChainStepReport chain_step(const std::vector<Slalom>& existing, const PathReal& f_beta, unsigned horizon) {
  ChainStepReport r;
  unsigned H = horizon;
  for (std::size_t a = 0; a < existing.size(); ++a) {
    const auto v = classify(existing[a], Ideal::W);
    if (v.status != Status::Yes || !existing[a].exact_tail())
      throw std::domain_error("input " + std::to_string(a) + " is not in W: " + v.certificate);
    H = std::max(H, existing[a].horizon());
  }
  if (H > kMaxHorizon) throw std::invalid_argument("horizon too large");
  r.horizon = H;
  auto note = [&](const std::string& s) {
    if (r.failures.size() < 40) r.failures.push_back(s);
  };
  std::vector<Slalom> in;
  for (const auto& s : existing) in.push_back(s.resized(H));

  // g_α(n): least g with Σ_{i≥g} |A_α(i)|/2^i < 2^{-n}.
  for (const auto& s : in) {
    std::vector<unsigned> ga;
    for (unsigned n = 0; n <= H; ++n) {
      unsigned g = 0;
      while (s.partial_sum(g) >= inverse_power_of_two(n)) ++g;
      ga.push_back(g);
    }
    r.g_alphas.push_back(std::move(ga));
  }
  for (unsigned n = 0; r.g.empty() || r.g.back() < H; ++n) {
    unsigned g = r.g.empty() ? 1 : r.g.back() + 1;
    for (const auto& ga : r.g_alphas) g = std::max(g, ga[std::min(n, H)] + 1);
    r.g.push_back(g);
  }
  const unsigned windows = static_cast<unsigned>(r.g.size()) - 1;

  for (const auto& ga : r.g_alphas) {
    unsigned m = static_cast<unsigned>(r.g.size());
    while (m > 0 && r.g[m - 1] >= ga[std::min(m - 1, H)]) --m;
    r.m_alphas.push_back(m);
  }
  for (std::size_t a = 0; a < in.size(); ++a) {
    std::vector<Slalom> blocks;
    for (unsigned n = 0; n < windows; ++n)
      blocks.push_back(n >= r.m_alphas[a] ? restrict_levels(in[a], r.g[n], r.g[n + 1], H) : Slalom(H));
    r.f_blocks.push_back(std::move(blocks));
  }

  // Φ(n): distinct blocks of the first n inputs.
  r.a = Slalom(H);
  for (unsigned n = 0; n < windows; ++n) {
    std::vector<Slalom> phi;
    for (std::size_t a = 0; a < std::min<std::size_t>(n, in.size()); ++a)
      if (std::find(phi.begin(), phi.end(), r.f_blocks[a][n]) == phi.end()) phi.push_back(r.f_blocks[a][n]);
    for (const auto& b : phi) r.a = unite(r.a, b);
    r.phi.push_back(std::move(phi));
  }
  for (std::size_t a = 0; a < in.size(); ++a) {
    unsigned m = windows;
    while (m > 0 && std::find(r.phi[m - 1].begin(), r.phi[m - 1].end(), r.f_blocks[a][m - 1]) != r.phi[m - 1].end()) --m;
    r.settle.push_back(std::max(m, r.m_alphas[a]));
  }

  // Invariants.
  for (std::size_t a = 0; a < in.size(); ++a)
    for (unsigned n = 0; n <= H; ++n)
      if (in[a].partial_sum(r.g_alphas[a][n]) >= inverse_power_of_two(n))
        note("tail of input " + std::to_string(a) + " too large for n = " + std::to_string(n));
  for (unsigned n = 0; n < windows; ++n) {
    if (r.phi[n].size() > n) note("localizer too wide at window " + std::to_string(n));
    for (const auto& b : r.phi[n]) {
      bool found = false;
      for (const auto& fa : r.f_blocks) found = found || fa[n] == b;
      if (!found) note("localizer block without a source at window " + std::to_string(n));
    }
    r.bounds.push_back(r.a.partial_sum(r.g[n], r.g[n + 1]));
    const Rational cap = make_rational(n, 1) * inverse_power_of_two(n);
    if (r.phi[n].empty() ? r.bounds.back() != 0 : r.bounds.back() >= cap)
      note("window sum over n/2^n at window " + std::to_string(n));
  }
  r.input_sum = 0;
  for (std::size_t a = 0; a < in.size(); ++a) {
    r.input_sum += in[a].partial_sum();
    const unsigned from = r.settle[a] < r.g.size() ? r.g[r.settle[a]] + 1 : H;
    for (unsigned j = from; j < H; ++j)
      if (!in[a][j].subset_of(r.a[j])) note(lvl("input " + std::to_string(a) + " escapes A", j));
    if (almost_subset(in[a], r.a).status != Status::Yes) note("input " + std::to_string(a) + " is not almost contained in A");
  }
  const Rational a_sum = r.a.partial_sum();
  if (a_sum >= 2) note("A sums to 2 or more");
  if (a_sum > r.input_sum) note("A exceeds the inputs");
  if (classify(r.a, Ideal::W).status != Status::Yes) note("A is not in W");

  // Least cutoff keeping (A ∪ f_β) unsaturated and within the budget.
  const Slalom graph = graph_of(f_beta).resized(H);
  const Slalom u = unite(r.a, graph);
  const Rational budget = a_sum + 1;
  r.cutoff = H;
  for (unsigned k = H; k-- > 1;) {
    if (u[k].saturated() || u.partial_sum(k) > budget) break;
    r.cutoff = k;
  }
  r.a_beta = restrict_levels(u, r.cutoff, H, H);
  if (classify(r.a_beta, Ideal::W).status != Status::Yes) note("A_beta is not in W");
  if (almost_subset(graph, r.a_beta).status != Status::Yes) note("graph of f_beta is not almost contained in A_beta");
  if (almost_subset(r.a, r.a_beta).status != Status::Yes) note("A is not almost contained in A_beta");
  return r;
}

std::vector<std::set<std::uint64_t>> independent_subsets(unsigned r, std::uint64_t universe, std::uint64_t witnesses) {
  if (universe == 0 || universe > (std::uint64_t{1} << 24)) throw std::invalid_argument("universe must be in [1, 2^24]");
  if (r >= 24 || (universe >> r) < witnesses)
    throw std::invalid_argument("universe too small: need M >= " + std::to_string(witnesses) + " * 2^" + std::to_string(r));
  std::vector<std::set<std::uint64_t>> out(r);
  for (std::uint64_t x = 0; x < universe; ++x)
    for (unsigned a = 0; a < r; ++a)
      if (x >> a & 1) out[a].insert(x);
  return out;
}

std::optional<std::uint64_t> sawtooth_element(unsigned level, std::uint64_t universe) {
  if (level < 2 || universe == 0) return std::nullopt;
  std::uint64_t p = level - 2;
  for (std::uint64_t tooth = 1;; ++tooth) {
    const std::uint64_t len = std::min(tooth, universe);
    if (p < len) return p;
    p -= len;
  }
}

std::set<unsigned> schedule_levels(const std::set<std::uint64_t>& subset, std::uint64_t universe, unsigned horizon) {
  std::set<unsigned> out;
  for (unsigned n = 2; n < horizon; ++n)
    if (subset.count(*sawtooth_element(n, universe))) out.insert(n);
  return out;
}

void BlockPair::validate() const {
  for (unsigned n = 2; n < base.horizon(); ++n) {
    const LevelSet s = base.at(n), a = z0.at(n), b = z1.at(n);
    if (s.size() < 2) throw std::invalid_argument(lvl("base has fewer than two columns", n));
    if (a.empty() || b.empty()) throw std::invalid_argument(lvl("empty block", n));
    if (!a.subset_of(s) || !b.subset_of(s)) throw std::invalid_argument(lvl("block leaves the base", n));
    if (!a.intersected(b).empty()) throw std::invalid_argument(lvl("blocks overlap", n));
  }
}

BlockPair BlockPair::standard(unsigned horizon) {
  BlockPair bp{Slalom(horizon), Slalom(horizon), Slalom(horizon)};
  for (unsigned n = 2; n < horizon; ++n) {
    bp.base.set_level(LevelSet(n, {0, 1}));
    bp.z0.set_level(LevelSet(n, {0}));
    bp.z1.set_level(LevelSet(n, {1}));
  }
  return bp;
}

Slalom build_S_alpha(const BlockPair& bp, const std::set<unsigned>& x) {
  Slalom out(bp.base.horizon());
  for (unsigned n = 2; n < bp.base.horizon(); ++n) out.set_level(x.count(n) ? bp.z1.at(n) : bp.z0.at(n));
  return out;
}

std::set<unsigned> pattern_levels(const std::vector<std::set<unsigned>>& xs, const Pattern& pattern, unsigned horizon) {
  std::set<unsigned> out;
  for (unsigned n = 2; n < horizon; ++n) {
    bool in = true;
    for (auto a : pattern.positive) in = in && xs.at(a).count(n);
    for (auto b : pattern.negative) in = in && !xs.at(b).count(n);
    if (in) out.insert(n);
  }
  return out;
}

bool IndependenceReport::ok() const {
  return !points.empty() && std::all_of(points.begin(), points.end(), [](const WitnessPoint& w) { return w.ok; });
}

IndependenceReport independence_check(const BlockPair& bp, const std::vector<Slalom>& alphas,
                                      const Pattern& pattern, const std::set<unsigned>& y, unsigned horizon) {
  bp.validate();
  const auto first = y.empty() ? y.end() : y.begin();
  if (first == y.end() || *first >= horizon) throw std::domain_error("Y is empty below the horizon");
  for (unsigned n : y) {
    if (n >= horizon) break;
    if (n < 2) throw std::invalid_argument("Y must start at level 2");
    for (auto a : pattern.positive)
      if (!(alphas.at(a).at(n) == bp.z1.at(n))) throw std::invalid_argument(lvl("positive index off Z1", n));
    for (auto b : pattern.negative)
      if (!(alphas.at(b).at(n) == bp.z0.at(n))) throw std::invalid_argument(lvl("negative index off Z0", n));
  }
  IndependenceReport rep{Slalom(horizon), {}};
  for (unsigned n = 2; n < horizon; ++n) rep.t.set_level(y.count(n) ? bp.z1.at(n) : bp.base.at(n));
  Conjunct c;
  for (auto a : pattern.positive) c.positives.push_back(SetGen{alphas[a]});
  for (auto b : pattern.negative) c.negatives.push_back(SetGen{alphas[b]});
  for (unsigned k = *first + 1; k <= horizon; ++k) {
    OmegaPoint p(rep.t.prefix(k), k);
    const bool ok = eval(c, p);
    rep.points.push_back({std::move(p), ok});
  }
  return rep;
}

BoundingResult bounding_search(const std::vector<Slalom>& family, unsigned horizon) {
  BoundingResult out;
  Slalom u(horizon);
  for (const auto& s : family) u = unite(u, s.resized(std::max(horizon, s.horizon())));
  out.saturation = saturation_witness(family);
  if (!out.saturation && classify(u, Ideal::S).status == Status::Yes) out.bound = u;
  return out;
}

}  // namespace slalomlab
