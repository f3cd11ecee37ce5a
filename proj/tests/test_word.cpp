#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/word.hpp"

#include <algorithm>
#include <random>

using namespace sunit;

TEST_CASE("word parse, reduce, print round trip") {
  Word w = Word::parse("a*b^-1*c^3");
  CHECK(w.size() == 5);
  CHECK(w.str() == "a*b^-1*c^3");
  CHECK(Word::parse(w.str()) == w);

  CHECK(Word::parse("1").empty());
  CHECK(Word::parse("a*a^-1").empty());
  CHECK((Word::letter("a") * Word::letter("a", -1)).empty());
  CHECK(Word::parse("x_1*x_1*x_1").str() == "x_1^3");
  CHECK_THROWS_AS(Word::parse("3a"), std::invalid_argument);
}

TEST_CASE("word inverse and power") {
  Word w = Word::parse("a*b^-1");
  CHECK((w * w.inverse()).empty());
  CHECK(w.pow(3).str() == "a*b^-1*a*b^-1*a*b^-1");
  CHECK(w.pow(-1) == w.inverse());
  CHECK(w.net_exponent("a") == 1);
  CHECK(w.net_exponent("b") == -1);
}

TEST_CASE("evaluate words into matrices") {
  std::map<std::string, RatMat> img;
  img["t"] = rat_mat({{1, 1}, {0, 1}});
  CHECK(is_identity(evaluate(Word(), img, 2)));
  CHECK(is_identity(evaluate(Word::parse("t*t^-1"), img, 2)));
  RatMat t2 = evaluate(Word::parse("t^2"), img, 2);
  CHECK(mat_eq(t2, rat_mat({{1, 2}, {0, 1}})));
}

TEST_CASE("abelian invariants of small presentations") {
  Presentation p1;
  p1.generators = {"a"};
  p1.relators = {Word::parse("a^3")};
  auto i1 = abelian_invariants(p1);
  CHECK(i1.free_rank == 0);
  REQUIRE(i1.torsion.size() == 1);
  CHECK(i1.torsion[0] == 3);

  Presentation p2;
  p2.generators = {"a", "b"};
  auto i2 = abelian_invariants(p2);
  CHECK(i2.free_rank == 2);
  CHECK(i2.torsion.empty());

  Presentation p3;
  p3.generators = {"a", "b"};
  p3.relators = {Word::parse("a^4"), Word::parse("b^6"), Word::parse("a^2*b^-3")};
  auto i3 = abelian_invariants(p3);
  CHECK(i3.free_rank == 0);
  REQUIRE(i3.torsion.size() == 1);
  CHECK(i3.torsion[0] == 12);
}

TEST_CASE("abelian invariants stable under relator permutation and inversion") {
  Presentation p;
  p.generators = {"a", "b", "c"};
  p.relators = {Word::parse("a^2*b^-1"), Word::parse("b^3*c^2"), Word::parse("c^6")};
  auto base = abelian_invariants(p);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Presentation q = p;
    std::shuffle(q.relators.begin(), q.relators.end(), rng);
    for (auto& r : q.relators)
      if (rng() % 2) r = r.inverse();
    CHECK(abelian_invariants(q) == base);
  }
}

TEST_CASE("simplify removes trivial and duplicate relators") {
  Presentation p;
  p.generators = {"a"};
  p.relators = {Word(), Word::parse("a^3"), Word::parse("a^3")};
  Presentation q = simplify(p);
  CHECK(q.relators.size() == 1);
  CHECK(q.relators[0] == Word::parse("a^3"));
}

TEST_CASE("simplify substitutes a length-2 definition") {
  Presentation p;
  p.generators = {"a", "b"};
  p.relators = {Word::parse("b*a^-1"), Word::parse("b^3")};
  Presentation q = simplify(p);
  CHECK(q.generators == std::vector<std::string>{"a"});
  REQUIRE(q.relators.size() == 1);
  CHECK(q.relators[0] == Word::parse("a^3"));
  auto inv = abelian_invariants(q);
  REQUIRE(inv.torsion.size() == 1);
  CHECK(inv.torsion[0] == 3);
}

TEST_CASE("simplify keeps images consistent") {
  Presentation p;
  p.generators = {"a", "b"};
  p.relators = {Word::parse("b*a^-1")};
  p.images["a"] = rat_mat({{1, 1}, {0, 1}});
  p.images["b"] = rat_mat({{1, 1}, {0, 1}});
  Presentation q = simplify(p);
  CHECK(q.generators.size() == 1);
  CHECK(q.images.size() == 1);
  CHECK(q.images.count("a") == 1);
}

TEST_CASE("plain text round trip") {
  Presentation p;
  p.generators = {"s", "t", "j"};
  p.relators = {Word::parse("s^4"), Word::parse("s^2*t^-1*s*j")};
  std::string text = to_text(p);
  Presentation q = parse_text(text);
  CHECK(q.generators == p.generators);
  REQUIRE(q.relators.size() == p.relators.size());
  for (std::size_t i = 0; i < q.relators.size(); ++i) CHECK(q.relators[i] == p.relators[i]);
  CHECK(abelian_invariants(q) == abelian_invariants(p));
}
