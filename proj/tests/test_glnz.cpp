#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/glnz.hpp"

#include <random>

using namespace sunit;

TEST_CASE("base_group(2): generators, determinants, SL invariants") {
  BaseGroup b = base_group(2);
  CHECK(b.pres.generators == std::vector<std::string>{"s", "t", "j"});
  for (const auto& [name, img] : b.pres.images) {
    Rat d = rat_det(img);
    CHECK((d == 1 || d == -1));
  }
  auto inv = abelian_invariants(b.sl_presentation());
  CHECK(inv.free_rank == 0);
  REQUIRE(inv.torsion.size() == 1);
  CHECK(inv.torsion[0] == 12);
}

TEST_CASE("base_group(3): Steinberg relators evaluate to the identity") {
  BaseGroup b = base_group(3);
  // Construction verifies; spot check a commutator relation by hand.
  RatMat e12 = b.pres.images.at("x12");
  RatMat e23 = b.pres.images.at("x23");
  RatMat e13 = b.pres.images.at("x13");
  RatMat comm = e12 * e23 * rat_inverse(e12) * rat_inverse(e23);
  CHECK(mat_eq(comm, e13));
  // SL_3(Z) abelianizes to the trivial group.
  auto inv = abelian_invariants(b.sl_presentation());
  CHECK(inv.free_rank == 0);
  CHECK(inv.torsion.empty());
}

TEST_CASE("base_group(4) loads with verified relators") {
  BaseGroup b = base_group(4);
  CHECK(b.pres.generators.size() == 13);
  auto inv = abelian_invariants(b.sl_presentation());
  CHECK(inv.free_rank == 0);
  CHECK(inv.torsion.empty());
}

TEST_CASE("base_group rejects unsupported rank") {
  CHECK_THROWS_AS(base_group(5), std::invalid_argument);
}

TEST_CASE("rewrite_in_base: stated examples") {
  BaseGroup b = base_group(2);
  CHECK(rewrite_in_base(rat_identity(2), b).empty());

  RatMat t2 = rat_mat({{1, 2}, {0, 1}});
  Word w = rewrite_in_base(t2, b);
  CHECK(mat_eq(evaluate(w, b.pres.images, 2), t2));

  RatMat g = rat_mat({{2, 1}, {1, 1}});
  Word w2 = rewrite_in_base(g, b);
  CHECK(mat_eq(evaluate(w2, b.pres.images, 2), g));
}

TEST_CASE("rewrite_in_base rejects bad input") {
  BaseGroup b = base_group(2);
  RatMat half = rat_identity(2);
  half(0, 0) = make_rat(1, 2);
  CHECK_THROWS_AS(rewrite_in_base(half, b), std::invalid_argument);
  CHECK_THROWS_AS(rewrite_in_base(rat_mat({{2, 0}, {0, 1}}), b), std::invalid_argument);
}

TEST_CASE("rewrite_in_base round trips on seeded random words") {
  std::mt19937_64 rng(20240901);
  for (int n : {2, 3}) {
    BaseGroup b = base_group(n);
    std::vector<std::string> names = b.pres.generators;
    for (int trial = 0; trial < (n == 2 ? 200 : 100); ++trial) {
      RatMat g = rat_identity(n);
      for (int s = 0; s < 12; ++s) {
        const std::string& name = names[rng() % names.size()];
        const RatMat& img = b.pres.images.at(name);
        g = g * (rng() % 2 ? img : rat_inverse(img));
      }
      Word w = rewrite_in_base(g, b);
      CHECK(mat_eq(evaluate(w, b.pres.images, n), g));
    }
  }
}

TEST_CASE("subspace_orbit: line orbits and Borel stabilizers") {
  BaseGroup b2 = base_group(2);
  FpMat line2 = fp_mat(2, {{1, 0}});
  auto o2 = subspace_orbit(b2, line2, 2);
  CHECK(o2.orbit_keys.size() == 3);

  auto o3 = subspace_orbit(b2, fp_mat(3, {{1, 0}}), 3);
  CHECK(o3.orbit_keys.size() == 4);
  // Stabilizer generators of the line spanned by e_1 fix it mod 3:
  // under the row-vector right action these are the matrices with a
  // zero top-right entry.
  for (const Word& w : o3.stabilizer_gens) {
    RatMat m = evaluate(w, b2.pres.images, 2);
    FpMat f = fp_image(m, 3);
    CHECK(f.m(0, 1) == 0);
  }

  BaseGroup b3 = base_group(3);
  auto o31 = subspace_orbit(b3, fp_mat(2, {{1, 0, 0}}), 2);
  CHECK(o31.orbit_keys.size() == 7);
}

TEST_CASE("subspace_orbit transporters reach their subspaces") {
  BaseGroup b = base_group(2);
  auto orbit = subspace_orbit(b, fp_mat(3, {{1, 0}}), 3);
  for (const auto& [key, word] : orbit.transporter) {
    RatMat m = evaluate(word, b.pres.images, 2);
    FpMat moved = rref(fp_mul(orbit.root, fp_image(m, 3)));
    CHECK(moved.key() == key);
  }
}

TEST_CASE("SL-part Schreier generators give projective-space index via Todd-Coxeter") {
  // Coset count equals the number of lines of F_p^n.
  struct Case {
    int n;
    long p;
    long expect;
  };
  for (Case c : {Case{2, 2, 3}, Case{2, 3, 4}, Case{3, 2, 7}}) {
    BaseGroup b = base_group(c.n);
    Presentation sl = b.sl_presentation();
    std::vector<std::pair<std::string, RatMat>> gens;
    for (const std::string& g : sl.generators) gens.emplace_back(g, sl.images.at(g));
    FpMat w0;
    w0.p = c.p;
    w0.m = FpEntryMat::Zero(1, c.n);
    w0.m(0, 0) = 1;
    auto orbit = subspace_orbit(gens, w0, c.p);
    CHECK(static_cast<long>(orbit.orbit_keys.size()) == c.expect);
    auto table = todd_coxeter(sl, orbit.stabilizer_gens, 200000);
    CHECK(table.num_cosets == c.expect);
  }
}
