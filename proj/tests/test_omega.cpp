#include <set>

#include "doctest.h"
#include "slalomlab/omega.hpp"
#include "support.hpp"

using namespace slalomlab;
using namespace slalomlab::testing;

TEST_CASE("enum_omega sizes") {
  CHECK(enum_omega(0).size() == 1u);
  CHECK(enum_omega(0)[0].level == 0u);
  CHECK(enum_omega(1).size() == 2u);
  CHECK(enum_omega(2).size() == 5u);  // 1 + 1 + 3
  // Oracle: product formula evaluated with plain integers.
  std::uint64_t total = 0, prod = 1;
  for (unsigned n = 0; n <= 4; ++n) {
    total += prod;
    prod *= (std::uint64_t{1} << (1u << n)) - 1;
  }
  CHECK(enum_omega(4).size() == total);
  CHECK(omega_count(4) == BigInt(static_cast<unsigned long>(total)));
  CHECK_THROWS(enum_omega(5));

  std::set<std::uint64_t> codes;
  unsigned last_level = 0;
  std::uint64_t last_code = 0;
  for (const auto& p : enum_omega(4)) {
    for (unsigned j = 0; j < p.level; ++j) CHECK(!p.trace[j].saturated());
    const auto code = trace_code(p);
    if (p.level == last_level) CHECK((codes.empty() || code > last_code));
    CHECK(point_from_code(p.level, code) == p);
    last_level = p.level;
    last_code = code;
    codes.insert(code);
  }
}

TEST_CASE("cursor follows the enumeration order") {
  OmegaCursor cur;
  for (const auto& p : enum_omega(3)) CHECK(cur.next() == p);
}

TEST_CASE("member and eval_term") {
  Rng rng(1);
  const SetGen empty{Slalom(3)};
  const WindowGen w(Slalom::from_table(2, {{1, {0}}}), 2);
  for (const auto& p : enum_omega(3)) {
    CHECK(member(empty, p));
    if (p.level < 2) CHECK(!member(w, p));
    CHECK(!eval_term(AlgebraTerm::zero(), p));
    CHECK(eval_term(AlgebraTerm::one(), p));
    const SetGen a{random_small_set(rng, 4)};
    CHECK(!eval(Conjunct{{a}, {a}}, p));
  }
  const OmegaPoint p(Slalom::from_table(2, {{1, {0}}}), 2);
  CHECK(member(SetGen{Slalom::from_table(2, {{1, {0}}})}, p));
  CHECK(member(w, p));
}

TEST_CASE("antitonicity of set generators") {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const Slalom b = random_small_set(rng, 5, 3);
    std::vector<LevelSet> sub;
    for (unsigned j = 0; j < 5; ++j) {
      std::vector<std::uint64_t> keep;
      for (auto c : b[j].columns())
        if (rng.coin()) keep.push_back(c);
      sub.emplace_back(j, keep);
    }
    const Slalom a(sub);
    for_each_point(4, [&](const OmegaPoint& p) {
      if (member(SetGen{b}, p)) CHECK(member(SetGen{a}, p));
      return true;
    });
  }
}

TEST_CASE("point_count agrees with explicit enumeration") {
  Rng rng(7);
  for (int t = 0; t < 150; ++t) {
    const Conjunct c = random_conjunct(rng, 5, 3);
    for (unsigned m = 0; m <= 4; ++m) REQUIRE(point_count(c, m) == brute_count(c, m));
  }
  for (int t = 0; t < 30; ++t) {
    AlgebraTerm term{{random_conjunct(rng, 4, 3), random_conjunct(rng, 4, 3)}};
    for (unsigned m = 0; m <= 4; ++m) CHECK(point_count(term, m) == brute_count(term, m));
    const AlgebraTerm neg = complement(term);
    for (unsigned m = 0; m <= 3; ++m)
      CHECK(brute_count(neg, m) + brute_count(term, m) == brute_count(AlgebraTerm::one(), m));
  }
}

TEST_CASE("meet_infinitude agrees with counting") {
  Rng rng(13);
  int infinite = 0, finite = 0, empty = 0;
  for (int t = 0; t < 300; ++t) {
    const Conjunct c = random_conjunct(rng, 6, 4);
    const MeetVerdict v = meet_infinitude(c);
    switch (v.kind) {
      case MeetKind::Empty:
        ++empty;
        for (unsigned m = 0; m <= 10; ++m) REQUIRE(point_count(c, m) == 0);
        break;
      case MeetKind::Finite:
        ++finite;
        for (unsigned m = *v.bound + 1; m <= 10; ++m) REQUIRE(point_count(c, m) == 0);
        break;
      case MeetKind::Infinite:
        ++infinite;
        for (unsigned m = v.from; m <= 10; ++m) {
          REQUIRE(point_count(c, m) > 0);
          REQUIRE(eval(c, v.witness(m)));
        }
        break;
    }
  }
  CHECK(infinite > 30);
  CHECK(finite + empty > 30);
}

TEST_CASE("meet_infinitude: candidate columns outside the blocked set") {
  // This seed reaches the branch with no free column at some level.
  Rng rng(404);
  for (int t = 0; t < 200; ++t) {
    const Conjunct c = random_conjunct(rng, 6, 4);
    const MeetVerdict v = meet_infinitude(c);
    if (v.kind == MeetKind::Infinite)
      for (unsigned m = std::max(v.from, 8u); m <= 10; ++m) REQUIRE(eval(c, v.witness(m)));
    else
      REQUIRE(point_count(c, 11) == 0);
  }
}

TEST_CASE("meet_infinitude: fixed cases") {
  const auto a = Slalom::from_table(4, {{2, {0, 1}}});
  const auto b = Slalom::from_table(4, {{2, {2, 3}}});
  const auto v = meet_infinitude(Conjunct{{SetGen{a}, SetGen{b}}, {}});
  CHECK(v.kind == MeetKind::Finite);
  CHECK(*v.bound == 2u);
  for (unsigned m = 3; m <= 8; ++m) CHECK(point_count(Conjunct{{SetGen{a}, SetGen{b}}, {}}, m) == 0);

  CHECK(meet_infinitude(Conjunct{{SetGen{a}}, {SetGen{a}}}).kind == MeetKind::Empty);

  const auto c = Slalom::from_table(4, {{2, {2}}, {3, {5}}});
  const Conjunct ac{{SetGen{a}, SetGen{c}}, {}};
  CHECK(meet_infinitude(ac).kind == MeetKind::Infinite);
  BigInt prev = -1;
  for (unsigned n = 8; n <= 12; ++n) {
    const BigInt cnt = point_count_upto(ac, n);
    CHECK(cnt > prev);
    prev = cnt;
  }
  CHECK_THROWS(meet_infinitude(Conjunct{{SetGen{Slalom(3, GeometricRule{3, make_rational(1, 2)})}}, {}}));
}

TEST_CASE("negated windows are resolved by trace case analysis") {
  // Window level 2 positive; negate every extension at level 3 but one.
  const WindowGen pos(Slalom::from_table(2, {{1, {}}}), 2);
  Conjunct c{{pos}, {}};
  std::vector<LevelSet> traces;
  for (std::uint64_t mask = 0; mask < 15; ++mask) {
    std::vector<std::uint64_t> cols;
    for (unsigned i = 0; i < 4; ++i)
      if (mask >> i & 1) cols.push_back(i);
    traces.emplace_back(2, cols);
  }
  for (std::size_t i = 0; i + 1 < traces.size(); ++i)
    c.negatives.push_back(WindowGen(Slalom({LevelSet(0), LevelSet(1), traces[i]}), 3));
  auto v = meet_infinitude(c);
  CHECK(v.kind == MeetKind::Infinite);
  CHECK(v.witness(5).trace[2] == traces.back());
  c.negatives.push_back(WindowGen(Slalom({LevelSet(0), LevelSet(1), traces.back()}), 3));
  v = meet_infinitude(c);
  CHECK(v.kind == MeetKind::Finite);
  CHECK(*v.bound == 2u);
  for (unsigned m = 3; m <= 6; ++m) CHECK(point_count(c, m) == 0);
}

TEST_CASE("canonicalize") {
  const WindowGen w0(Slalom(0), 0);
  const auto e = canonicalize(Slalom(3), w0);
  CHECK(e.window.level == 1u);
  CHECK(is_canonical(e));
  CHECK(canonicalize(e.a, e.window) == e);

  // A(2) has 3 = 2^2 - 1 columns, so the window moves up to level 3.
  const auto a = Slalom::from_table(5, {{2, {0, 1, 3}}, {3, {1}}});
  const WindowGen w(Slalom::from_table(2, {{1, {}}}), 2);
  const auto ca = canonicalize(a, w);
  CHECK(ca.window.level == 3u);
  CHECK(ca.window.trace[2] == a[2]);
  CHECK_THROWS(canonicalize(Slalom::from_table(3, {{2, {0, 1, 2, 3}}}), w0));

  // Equal mod-finite meets give identical canonical forms, and conversely.
  Rng rng(17);
  std::vector<PiBaseElement> elems;
  std::vector<Conjunct> raw;
  for (int t = 0; t < 60; ++t) {
    const Slalom s = random_small_set(rng, 5, 3);
    Slalom base(0);
    const WindowGen win = random_window(rng, 3, base);
    const Conjunct c{{SetGen{s}, win}, {}};
    if (meet_infinitude(c).kind != MeetKind::Infinite) continue;
    elems.push_back(canonicalize(s, win));
    CHECK(is_canonical(elems.back()));
    CHECK(canonicalize(elems.back().a, elems.back().window) == elems.back());
    raw.push_back(c);
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j) {
      bool same_tail = true;
      for (unsigned m = 6; m <= 8 && same_tail; ++m)
        same_tail = point_count(conjoin(raw[i], Conjunct{{}, {std::get<SetGen>(raw[j].positives[0])}}), m) == 0 &&
                    point_count(conjoin(raw[i], Conjunct{{}, {std::get<WindowGen>(raw[j].positives[1])}}), m) == 0 &&
                    point_count(conjoin(raw[j], Conjunct{{}, {std::get<SetGen>(raw[i].positives[0])}}), m) == 0 &&
                    point_count(conjoin(raw[j], Conjunct{{}, {std::get<WindowGen>(raw[i].positives[1])}}), m) == 0;
      CHECK(same_tail == (elems[i] == elems[j]));
    }
}

TEST_CASE("pibase_enum") {
  const auto only_empty = pibase_enum({Slalom(3)}, 2);
  // every window (S,n) with n <= 2 canonicalizes to level max(n,1) with A = trace
  CHECK(only_empty.size() == 4u);
  for (const auto& e : only_empty) CHECK(e.a.empty() == e.window.trace.empty());

  const auto a = Slalom::from_table(4, {{2, {0}}, {3, {1, 2}}});
  CHECK(!pibase_enum({a}, 3).empty());

  const auto x = Slalom::from_table(4, {{2, {0, 1}}});
  const auto y = Slalom::from_table(4, {{2, {2, 3}}});
  for (const auto& e : pibase_enum({x, y}, 3)) CHECK(!(e.a.at(2).size() == 4));
}

TEST_CASE("fact_check") {
  const auto rep = fact_check(7, 10, 99);
  CHECK(rep.ok());
  CHECK(rep.failures.empty());
  CHECK(rep.points_checked > 100000u);
}
