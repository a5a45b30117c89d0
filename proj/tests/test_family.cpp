#include <set>

#include "doctest.h"
#include "slalomlab/family.hpp"
#include "support.hpp"

using namespace slalomlab;

TEST_CASE("parse_levels and format_levels") {
  const Slalom s = parse_levels("2: 0,1; 3: 5", 6);
  CHECK(s == Slalom::from_table(6, {{2, {0, 1}}, {3, {5}}}));
  CHECK(format_levels(s) == "2: 0,1; 3: 5");
  CHECK(parse_levels(format_levels(s), 6) == s);
  CHECK(parse_levels("", 4) == Slalom(4));
  CHECK_THROWS_AS(parse_levels("2: 4", 6), InputError);
  CHECK_THROWS_AS(parse_levels("6: 0", 6), InputError);
  CHECK_THROWS_AS(parse_levels("2 0", 6), InputError);
  CHECK_THROWS_AS(parse_levels("2: 1,1", 6), InputError);
  CHECK_THROWS_AS(parse_levels("2: x", 6), InputError);
}

TEST_CASE("parse_tail") {
  CHECK(!parse_tail("empty"));
  CHECK(!parse_tail(""));
  const auto r = parse_tail("geometric 8 1/2");
  REQUIRE(r);
  CHECK(r->first_level == 8u);
  CHECK(r->ratio == Rational(1, 2));
  CHECK_THROWS_AS(parse_tail("geometric 8"), InputError);
  CHECK_THROWS_AS(parse_tail("geometric 8 3/2"), InputError);
  CHECK_THROWS_AS(parse_tail("linear 1 1"), InputError);
}

TEST_CASE("parse_config: kinds and errors") {
  const std::string text = R"(
# two families
[family.t]
kind = table
horizon = 6
member.a = 2: 0; 3: 1   # trailing comment
member.b = 4: 0,1
tail = geometric 6 1/4

[family.g]
kind = graph
path = 0,1,2,3

[family.c]
kind = chain
from = g
horizon = 8
path = 0,1,0,1,0,1,0,1

[run]
depth = 4
)";
  const Config c = parse_config(text);
  REQUIRE(c.families.size() == 3u);
  CHECK(c.run.at("depth") == "4");
  const auto& t = c.family("t");
  CHECK(t.members.size() == 2u);
  CHECK(t.get("a").slalom[3].contains(1));
  CHECK(t.get("a").provenance == "rule");
  const auto& g = c.family("g");
  CHECK(g.horizon == 4u);
  CHECK(g.get("f").slalom == graph_of(PathReal({0, 1, 2, 3})));
  CHECK(c.family("c").get("a_beta").provenance == "chain-step output");
  CHECK_THROWS_AS(c.family("missing"), InputError);
  CHECK_THROWS_AS(t.get("zz"), InputError);

  CHECK_THROWS_AS(parse_config("[family.x]\nkind = table\nhorizon = 4\n"), InputError);
  CHECK_THROWS_AS(parse_config("[family.x]\nkind = nope\n"), InputError);
  CHECK_THROWS_AS(parse_config("[other]\n"), InputError);
  CHECK_THROWS_AS(parse_config("[run]\na = 1\na = 2\n"), InputError);
  CHECK_THROWS_AS(parse_config("[run]\n[run]\n"), InputError);
  CHECK_THROWS_AS(parse_config("a = 1\n"), InputError);
  CHECK_THROWS_AS(parse_config("[family.x]\nkind = table\nhorizon = 4\nlevels = 1: 0\ncolour = red\n"), InputError);
  CHECK_THROWS_AS(parse_config("[family.x]\nkind = chain\nfrom = y\nhorizon = 4\npath = 0\n"), InputError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), InputError);
}

TEST_CASE("serialize round trip and digest") {
  const std::vector<std::string> decls = {
      "[family.a]\nkind = random-w\nhorizon = 10\ncount = 5\nseed = 3\n",
      "[family.b]\nkind = random-z\nhorizon = 12\ncount = 7\nseed = 9\n",
      "[family.c]\nkind = random-v\nhorizon = 12\ncount = 4\nseed = 1\ncutoff = 5\n",
      "[family.d]\nkind = block-pair\nhorizon = 16\nr = 3\n",
      "[family.e]\nkind = table\nhorizon = 5\nlevels = 3: 0,7\n",
  };
  std::set<std::string> digests;
  for (const auto& text : decls) {
    const FamilySpec f = deserialize(text);
    const FamilySpec back = deserialize(serialize(f));
    CHECK(back == f);
    CHECK(digest(back) == digest(f));
    CHECK(digest(f).size() == 16u);
    digests.insert(digest(f));
    for (const auto& m : f.members) CHECK(m.slalom.horizon() == f.horizon);
  }
  CHECK(digests.size() == decls.size());
  // A different seed changes the members and the digest.
  const auto s1 = deserialize("[family.a]\nkind = random-w\nhorizon = 10\ncount = 5\nseed = 3\n");
  const auto s2 = deserialize("[family.a]\nkind = random-w\nhorizon = 10\ncount = 5\nseed = 4\n");
  CHECK(digest(s1) != digest(s2));
  CHECK(deserialize("[family.d]\nkind = block-pair\nhorizon = 16\nr = 3\n").members.size() == 6u);
}

TEST_CASE("generators land in their ideals") {
  Rng rng(21);
  for (const auto& s : random_z_family(rng, 40, 16)) {
    CHECK(classify(s, Ideal::Z).status == Status::Yes);
    CHECK(classify(s, Ideal::S).status == Status::Yes);
  }
  for (unsigned k = 2; k <= 6; ++k)
    for (const auto& s : random_bucket(rng, 6, k, 14)) {
      CHECK(classify(s, Ideal::V).status == Status::Yes);
      for (unsigned j = k; j < 14; ++j) CHECK(Rational(s[j].size(), std::uint64_t{1} << j) < Rational(1, 9));
    }
  // Same seed, same family.
  Rng a(5), b(5);
  const auto fa = random_z_family(a, 10, 12), fb = random_z_family(b, 10, 12);
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == fb[i]);
}
