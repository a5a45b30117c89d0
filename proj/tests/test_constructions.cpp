#include "doctest.h"
#include "slalomlab/constructions.hpp"
#include "support.hpp"

using namespace slalomlab;
using namespace slalomlab::testing;

namespace {

PathReal random_real(Rng& rng, unsigned horizon) {
  std::vector<std::uint64_t> v;
  for (unsigned n = 0; n < horizon; ++n) v.push_back(rng.below(std::uint64_t{1} << n));
  return PathReal(std::move(v));
}

// Oracle: Σ_i |s(i)|/2^i by direct counting.
Rational recount(const Slalom& s) {
  Rational t = 0;
  for (unsigned i = 0; i < s.horizon(); ++i) t += Rational(static_cast<unsigned long>(s[i].size())) * inverse_power_of_two(i);
  return t;
}

}  // namespace

TEST_CASE("chain_step with no inputs") {
  const PathReal zero(std::vector<std::uint64_t>(12, 0));
  const auto r = chain_step({}, zero, 12);
  CHECK(r.ok());
  CHECK(r.a.empty());
  CHECK(r.cutoff == 1u);
  CHECK(r.a_beta == graph_of(zero));
}

TEST_CASE("chain_step over its own graph") {
  Rng rng(2);
  const PathReal f = random_real(rng, 16);
  const auto a0 = graph_of(f);
  const auto r = chain_step({a0}, f, 16);
  CHECK(r.ok());
  CHECK(almost_subset(a0, r.a_beta).status == Status::Yes);
  CHECK(almost_subset(a0, r.a).status == Status::Yes);
}

TEST_CASE("chain_step on random W inputs") {
  Rng rng(9);
  for (int t = 0; t < 15; ++t) {
    std::vector<Slalom> in;
    for (int i = 0; i < 3; ++i) in.push_back(random_sparse_slalom(rng, 24));
    const auto r = chain_step(in, random_real(rng, 24), 24);
    INFO(t);
    CHECK(r.ok());
    for (const auto& s : in) CHECK(almost_subset(s, r.a).status == Status::Yes);
    for (std::size_t n = 0; n < r.phi.size(); ++n) CHECK(r.phi[n].size() <= n + 1);
    Rational in_sum = 0;
    for (const auto& s : in) in_sum += recount(s);
    CHECK(recount(r.a) <= in_sum + 2);
    CHECK(recount(r.a) < 2);
    CHECK(std::is_sorted(r.g.begin(), r.g.end()));
    CHECK(std::adjacent_find(r.g.begin(), r.g.end()) == r.g.end());
  }
  CHECK_THROWS(chain_step({Slalom::from_table(4, {{2, {0, 1, 2, 3}}})}, PathReal({0, 0, 0, 0}), 4));
}

TEST_CASE("independent_subsets: exhaustive pattern counts") {
  for (auto [r, t] : {std::pair{1u, 3u}, {2u, 1u}, {5u, 4u}}) {
    const std::uint64_t m = std::uint64_t{t} << r;
    const auto xs = independent_subsets(r, m, t);
    REQUIRE(xs.size() == r);
    std::vector<std::uint64_t> hits(std::size_t{1} << r, 0);
    for (std::uint64_t x = 0; x < m; ++x) {
      std::size_t pat = 0;
      for (unsigned a = 0; a < r; ++a)
        if (xs[a].count(x)) pat |= std::size_t{1} << a;
      ++hits[pat];
    }
    for (auto h : hits) CHECK(h >= t);
  }
  CHECK_THROWS(independent_subsets(5, 100, 4));
}

TEST_CASE("sawtooth schedule") {
  CHECK(!sawtooth_element(1, 4));
  std::vector<std::uint64_t> seq;
  for (unsigned n = 2; n < 12; ++n) seq.push_back(*sawtooth_element(n, 4));
  CHECK(seq == std::vector<std::uint64_t>{0, 0, 1, 0, 1, 2, 0, 1, 2, 3});
  CHECK(*sawtooth_element(12, 3) == 1);  // teeth stop growing at the universe size
  CHECK(schedule_levels({3}, 4, 16) == (std::set<unsigned>{11, 15}));
}

TEST_CASE("build_S_alpha") {
  const auto bp = BlockPair::standard(10);
  CHECK_NOTHROW(bp.validate());
  CHECK(build_S_alpha(bp, {}) == bp.z0);
  std::set<unsigned> all, evens;
  for (unsigned n = 0; n < 10; ++n) {
    all.insert(n);
    if (n % 2 == 0) evens.insert(n);
  }
  CHECK(build_S_alpha(bp, all) == bp.z1);
  const auto s = build_S_alpha(bp, evens);
  for (unsigned n = 2; n < 10; ++n) {
    CHECK(s[n].subset_of(bp.base[n]));
    CHECK(s[n] == (n % 2 == 0 ? bp.z1[n] : bp.z0[n]));
  }
  CHECK(classify(s, Ideal::W).status == Status::Yes);
  BlockPair bad = bp;
  bad.z1.set_level(LevelSet(4, {0}));
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("level 4"));
}

TEST_CASE("independence_check") {
  const unsigned H = 16;
  const auto bp = BlockPair::standard(H);
  const auto subsets = independent_subsets(2, 4);
  std::vector<std::set<unsigned>> xs;
  std::vector<Slalom> alphas;
  for (const auto& x : subsets) {
    xs.push_back(schedule_levels(x, 4, H));
    alphas.push_back(build_S_alpha(bp, xs.back()));
  }
  for (const Pattern& p : {Pattern{{0}, {}}, Pattern{{0}, {1}}, Pattern{{}, {0, 1}}, Pattern{{0, 1}, {}}}) {
    const auto y = pattern_levels(xs, p, H);
    REQUIRE(!y.empty());
    const auto rep = independence_check(bp, alphas, p, y, H);
    CHECK(rep.ok());
    CHECK(rep.points.size() >= H - *y.begin() - 1);
    // Oracle: evaluate the signed meet directly on each emitted point.
    for (const auto& w : rep.points) {
      bool in = true;
      for (auto a : p.positive)
        for (unsigned j = 0; j < w.point.level; ++j) in = in && alphas[a][j].subset_of(w.point.trace[j]);
      for (auto b : p.negative) {
        bool sub = true;
        for (unsigned j = 0; j < w.point.level; ++j) sub = sub && alphas[b][j].subset_of(w.point.trace[j]);
        in = in && !sub;
      }
      CHECK(in);
    }
  }
  CHECK_THROWS(independence_check(bp, alphas, Pattern{{0}, {}}, {}, H));
  CHECK_THROWS(independence_check(bp, alphas, Pattern{{0}, {}}, {20}, H));
}

TEST_CASE("bounding_search") {
  const auto a = Slalom::from_table(5, {{2, {0}}, {3, {1}}});
  CHECK(bounding_search({a}, 5).bound == a);
  const auto b = Slalom::from_table(5, {{2, {0, 1, 2}}, {3, {1, 5}}});
  CHECK(bounding_search({a, b}, 5).bound == b);
  const auto c = Slalom::from_table(5, {{2, {3}}});
  const auto none = bounding_search({a, b, c}, 5);
  CHECK(!none.bound);
  REQUIRE(none.saturation);
  CHECK(none.saturation->level == 2u);

  // Oracle: a bound exists iff no level of the union fills up.
  Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    std::vector<Slalom> fam;
    for (int i = 0; i < 4; ++i) fam.push_back(random_small_set(rng, 5, 3));
    bool sat = false;
    for (unsigned j = 0; j < 5; ++j) {
      LevelSet u(j);
      for (const auto& s : fam) u = u.united(s[j]);
      sat = sat || u.saturated();
    }
    const auto r = bounding_search(fam, 5);
    CHECK(r.bound.has_value() == !sat);
    if (r.bound)
      for (const auto& s : fam) CHECK(s.subset_of(*r.bound));
  }
}
