#include "doctest.h"
#include "slalomlab/measure.hpp"
#include "support.hpp"

using namespace slalomlab;
using namespace slalomlab::testing;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }
}  // namespace

TEST_CASE("level_factor") {
  const auto w = Slalom::from_table(4, {{2, {0, 1, 2, 3}}, {3, {5}}});
  CHECK(level_factor(w, 1) == 1);
  CHECK(level_factor(w, 2) == 0);
  CHECK(level_factor(w, 3) == q(7, 8));
  CHECK_THROWS(level_factor(w, 0));
  // cylinder oracle at level 3
  PathSpace ps(SlalomName::generic(), 4);
  CHECK(ps.fraction([&](const PathSpace& s) { return s.in(3, 5); }) == q(7, 8));
}

TEST_CASE("containment_measure: fixed cases") {
  CHECK(containment_measure(Slalom(5), SlalomName::generic()).value == 1);
  const auto w = Slalom::from_table(4, {{2, {0}}, {3, {0}}});
  CHECK(containment_measure(w, SlalomName::generic()).value == q(21, 32));
  PathSpace ps(SlalomName::generic(), 4);
  CHECK(ps.fraction([&](const PathSpace& s) { return s.contains(w); }) == q(21, 32));

  const OmegaPoint off(Slalom::from_table(3, {{2, {1}}}), 3);
  CHECK(containment_measure(w, SlalomName::windowed(off)).value == 0);
  const OmegaPoint on(Slalom::from_table(3, {{2, {0}}}), 3);
  CHECK(containment_measure(w, SlalomName::windowed(on)).value == q(7, 8));
}

TEST_CASE("containment_measure matches the path-space oracle") {
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    const Slalom w = random_small_set(rng, 5, 3);
    CHECK(containment_measure(w, SlalomName::generic()).value ==
          PathSpace(SlalomName::generic(), 5).fraction([&](const PathSpace& s) { return s.contains(w); }));
    const WindowGen win = random_window(rng, 3, w.prefix(3));
    const SlalomName name{win.trace, win.level};
    CHECK(containment_measure(w, name).value ==
          PathSpace(name, 5).fraction([&](const PathSpace& s) { return s.contains(w); }));
  }
}

TEST_CASE("containment_measure with rule tails brackets the truth") {
  const Slalom w(4, GeometricRule{4, q(1, 4)});
  const auto m = containment_measure(w, SlalomName::generic());
  CHECK(m.hi == 1);
  CHECK(m.lo == 1 - q(1, 3));
  // any exact extension obeying the rule lies in the interval
  const auto ext = Slalom::from_table(7, {{4, {0, 1, 2, 3}}, {5, {0, 1}}, {6, {0}}});
  const auto v = containment_measure(ext, SlalomName::generic()).value;
  CHECK(m.lo <= v);
  CHECK(v <= m.hi);
  const Slalom gap(4, GeometricRule{6, q(1, 2)});
  CHECK(containment_measure(gap, SlalomName::generic()).lo == 0);
}

TEST_CASE("term_measure") {
  const auto a = Slalom::from_table(4, {{2, {0}}});
  CHECK(term_measure({a}, {a}, SlalomName::generic()).value == 0);
  const auto v = Slalom::from_table(4, {{3, {0}}});
  CHECK(term_measure({a}, {v}, SlalomName::generic()).value == q(3, 32));
  CHECK(PathSpace(SlalomName::generic(), 4).fraction([&](const PathSpace& s) {
    return s.contains(a) && !s.contains(v);
  }) == q(3, 32));
  const auto b = Slalom::from_table(4, {{2, {1}}, {3, {2}}});
  CHECK(term_measure({a, b}, {Slalom::from_table(4, {{3, {2}}})}, SlalomName::generic()).value == 0);
  const auto sat = Slalom::from_table(4, {{1, {0, 1}}});
  CHECK(term_measure({sat}, {}, SlalomName::generic()).value == 0);
}

TEST_CASE("nu matches the path-space oracle on mixed conjuncts") {
  Rng rng(8);
  for (int t = 0; t < 80; ++t) {
    const Conjunct c = random_conjunct(rng, 5, 3);
    const WindowGen win = random_window(rng, 3, Slalom(0));
    const SlalomName name{win.trace, win.level};
    for (const SlalomName& nm : {SlalomName::generic(), name})
      REQUIRE(nu(nm, c) == PathSpace(nm, 5).fraction([&](const PathSpace& s) { return s.holds(c); }));
  }
}

TEST_CASE("nu is finitely additive and vanishes on finite meets") {
  Rng rng(12);
  int finite_seen = 0;
  for (int t = 0; t < 150; ++t) {
    const Conjunct c = random_conjunct(rng, 6, 3);
    const Generator g = SetGen{random_small_set(rng, 6)};
    const auto v = meet_infinitude(c);
    for (const auto& p : enum_omega(3)) {
      const auto name = SlalomName::windowed(p);
      CHECK(nu(name, c) == nu(name, conjoin(c, Conjunct{{g}, {}})) + nu(name, conjoin(c, Conjunct{{}, {g}})));
      CHECK(nu(name, conjoin(c, Conjunct{{g}, {}})) <= nu(name, c));
      if (v.kind != MeetKind::Infinite) CHECK(nu(name, c) == 0);
    }
    if (v.kind != MeetKind::Infinite) ++finite_seen;
  }
  CHECK(finite_seen > 10);
}

TEST_CASE("delta_compare and converge_sweep") {
  const Slalom empty(6);
  for (const auto& r : delta_compare(empty, enum_omega(3))) {
    CHECK(r.in_tw);
    CHECK(r.nu == 1);
  }
  const auto w = Slalom::from_table(6, {{2, {0}}});
  const OmegaPoint p(Slalom::from_table(3, {{2, {0, 1}}}), 3);
  const auto rows = delta_compare(w, {p});
  CHECK(rows[0].in_tw);
  CHECK(rows[0].nu == 1);
  const OmegaPoint p2(Slalom::from_table(2, {}), 2);
  CHECK(delta_compare(w, {p2})[0].nu == q(3, 4));
  CHECK(delta_compare(w, {OmegaPoint(Slalom::from_table(3, {{2, {3}}}), 3)})[0].nu == 0);

  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    const Slalom x = random_sparse_slalom(rng, 7);
    const auto rep = converge_sweep(x, 8, 8, t);
    CHECK(rep.ok());
    CHECK(rep.levels.size() == 9u);
  }
}

TEST_CASE("mu") {
  const auto z = mu(AlgebraTerm::zero(), 20);
  CHECK(z.value.value == 0);
  CHECK(z.value.is_exact());
  const auto one = mu(AlgebraTerm::one(), 20);
  CHECK(one.value.lo == 1 - inverse_power_of_two(20));
  CHECK(one.value.hi == 1);
  CHECK(one.strictly_positive);

  const auto a = Slalom::from_table(4, {{2, {0, 1}}});
  const auto b = Slalom::from_table(4, {{2, {2, 3}}});
  const auto fin = mu(AlgebraTerm{{Conjunct{{SetGen{a}, SetGen{b}}, {}}}}, 30);
  CHECK(fin.value.value == 0);
  CHECK(fin.value.is_exact());

  // lower bound is monotone in K
  const AlgebraTerm t = AlgebraTerm::atom(SetGen{Slalom::from_table(4, {{2, {1}}, {3, {4}}})});
  Rational prev = -1;
  for (unsigned K = 1; K <= 40; K += 3) {
    const auto m = mu(t, K);
    CHECK(m.value.lo >= prev);
    CHECK(m.value.hi - m.value.lo == inverse_power_of_two(K));
    prev = m.value.lo;
  }
}

TEST_CASE("destructibility and Borel-Cantelli") {
  CHECK(destructibility_certificate(Slalom(5), q(1, 2)).n == 0u);
  CHECK(destructibility_certificate(Slalom(5), q(1, 2)).bound == 0);
  const auto g = graph_of(PathReal({0, 0, 0, 0, 0, 0, 0, 0}));
  const auto c = destructibility_certificate(g, q(1, 4));
  CHECK(c.n == 2u);
  CHECK(c.bound < q(1, 4));
  CHECK(destructibility_certificate(g, q(2)).n == 0u);
  CHECK_THROWS(destructibility_certificate(Slalom::from_table(3, {{1, {0, 1}}}), q(1, 2)));

  CHECK(borel_cantelli_bound(Slalom(4), 1) == 0);
  CHECK(borel_cantelli_bound(g, 1) == 1 - inverse_power_of_two(7));
  CHECK(borel_cantelli_bound(g, 20) == 0);
  Rational prev = 2;
  for (unsigned m = 0; m < 10; ++m) {
    CHECK(borel_cantelli_bound(g, m) <= prev);
    prev = borel_cantelli_bound(g, m);
  }
  // union-of-cylinders oracle: λ(∃ n ≥ m, f(n) ∈ w(n)) ≤ the bound
  const auto w = Slalom::from_table(5, {{2, {0, 3}}, {3, {1}}, {4, {2, 9}}});
  for (unsigned m = 1; m < 5; ++m) {
    const Rational hit = PathSpace(SlalomName::generic(), 5).fraction([&](const PathSpace& s) {
      for (unsigned n = m; n < 5; ++n)
        for (auto col : w[n].columns())
          if (!s.in(n, col)) return true;
      return false;
    });
    CHECK(hit <= borel_cantelli_bound(w, m));
  }
}

TEST_CASE("majority_extract") {
  std::map<std::pair<unsigned, std::uint64_t>, Rational> generic;
  for (unsigned n = 1; n < 6; ++n)
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) generic[{n, k}] = 1 - inverse_power_of_two(n);
  const auto r = majority_extract(generic, 6, [](unsigned n) -> BigInt { return BigInt(n) * power_of_two(n); });
  CHECK(r.budget_ok);
  CHECK(r.size_ok);
  CHECK(r.a[1].empty());  // threshold at n = 1 is 1
  for (unsigned n = 2; n < 6; ++n) CHECK(r.a[n].saturated());

  const auto none = majority_extract({{{3, 1}, q(1, 100)}}, 5, [](unsigned n) -> BigInt { return BigInt(n) * power_of_two(n); });
  CHECK(none.a.empty());

  const auto tight = majority_extract(generic, 6, [](unsigned n) -> BigInt { return power_of_two(n); });
  CHECK(tight.size_ok);  // threshold 1 is never exceeded
  std::map<std::pair<unsigned, std::uint64_t>, Rational> over{{{1, 0}, 1}, {{1, 1}, 1}};
  CHECK(!majority_extract(over, 2, [](unsigned) -> BigInt { return BigInt(8); }).budget_ok);
}
