#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/quaternion.hpp"

#include <random>
#include <set>

using namespace sunit;

TEST_CASE("hilbert symbols and ramification of (-1,-1)") {
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), 2) == -1);
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), 3) == 1);
  CHECK(hilbert_symbol(Rat(-1), Rat(-1), 0) == -1);
  CHECK(ramified_primes(QuatAlg{Rat(-1), Rat(-1)}) == std::vector<long>{2});

  // Product formula over all places for a few pairs.
  std::vector<std::pair<long, long>> pairs{{-1, -1}, {-1, -3}, {-2, -5}, {-3, -7}, {2, 3}};
  for (auto [a, b] : pairs) {
    int prod = hilbert_symbol(Rat(a), Rat(b), 0);
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) prod *= hilbert_symbol(Rat(a), Rat(b), p);
    CHECK(prod == 1);
  }
  CHECK_THROWS_AS(hilbert_symbol(Rat(0), Rat(1), 2), std::invalid_argument);
}

TEST_CASE("quaternion arithmetic identities") {
  QuatAlg alg{Rat(-1), Rat(-1)};
  QuatElt i{{Rat(0), Rat(1), Rat(0), Rat(0)}};
  QuatElt j{{Rat(0), Rat(0), Rat(1), Rat(0)}};
  QuatElt k{{Rat(0), Rat(0), Rat(0), Rat(1)}};
  CHECK(quat_mul(alg, i, j) == k);
  CHECK(quat_mul(alg, j, i) == quat_neg(k));
  CHECK(quat_mul(alg, i, i) == QuatElt::scalar(Rat(-1)));
  QuatElt x{{Rat(1), Rat(1), Rat(1), Rat(0)}};
  CHECK(quat_nrd(alg, x) == 3);
  CHECK(quat_trd(x) == 2);
  CHECK(quat_mul(alg, x, quat_inv(alg, x)) == QuatElt::one());
}

TEST_CASE("reduced norm is multiplicative on random pairs") {
  QuatAlg alg{Rat(-2), Rat(-5)};
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    QuatElt x, y;
    for (int t = 0; t < 4; ++t) {
      x.c[t] = Rat(coef(rng));
      y.c[t] = Rat(coef(rng));
    }
    CHECK(quat_nrd(alg, quat_mul(alg, x, y)) == quat_nrd(alg, x) * quat_nrd(alg, y));
  }
}

TEST_CASE("orders: discriminants and maximality certificates") {
  QuatOrder hur = hurwitz_order();
  CHECK(reduced_discriminant(hur) == 2);
  CHECK(is_maximal(hur));
  QuatOrder lip = lipschitz_order();
  CHECK(reduced_discriminant(lip) == 4);
  CHECK_FALSE(is_maximal(lip));
}

TEST_CASE("regular representation is a homomorphism") {
  QuatOrder o = hurwitz_order();
  QuatElt x{{Rat(1), Rat(1), Rat(0), Rat(0)}};
  QuatElt y{{make_rat(1, 2), make_rat(1, 2), make_rat(1, 2), make_rat(1, 2)}};
  CHECK(mat_eq(RatMat(right_rep(o, x) * right_rep(o, y)), right_rep(o, quat_mul(o.alg, x, y))));
  CHECK(rep_to_element(o, right_rep(o, y)) == y);
}

TEST_CASE("unit groups: Hurwitz 24, Lipschitz 8") {
  auto hur_units = unit_group(hurwitz_order());
  CHECK(hur_units.size() == 24);
  auto lip_units = unit_group(lipschitz_order());
  CHECK(lip_units.size() == 8);
  bool has_one = false, has_minus_one = false;
  for (const QuatElt& u : lip_units) {
    if (u == QuatElt::one()) has_one = true;
    if (u == quat_neg(QuatElt::one())) has_minus_one = true;
  }
  CHECK(has_one);
  CHECK(has_minus_one);
}

TEST_CASE("neighbor ideals at split primes") {
  QuatOrder o = hurwitz_order();
  auto n3 = neighbor_ideals(o, 3);
  CHECK(n3.size() == 4);
  for (const auto& j : n3) CHECK(abs(int_det(j.basis).get_num()) == 9);
  auto n5 = neighbor_ideals(o, 5);
  CHECK(n5.size() == 6);
  CHECK_THROWS_AS(neighbor_ideals(o, 2), std::invalid_argument);
}

TEST_CASE("principal generators of neighbors and special ideals") {
  QuatOrder o = hurwitz_order();

  IdealLattice full{int_identity(4)};
  CHECK(principal_generator(o, full) == QuatElt::one());
  IdealLattice triple{IntMat(Int(3) * int_identity(4))};
  CHECK(principal_generator(o, triple) == QuatElt::scalar(Rat(3)));

  // The ideal generated by 1+i+j contains it and has a norm-3 generator.
  QuatElt x{{Rat(1), Rat(1), Rat(1), Rat(0)}};
  IdealLattice jx{hnf(to_int(right_rep(o, x))).H};
  QuatElt g = principal_generator(o, jx);
  CHECK(quat_nrd(o.alg, g) == 3);
  CHECK(mat_eq(hnf(to_int(right_rep(o, g))).H, jx.basis));

  for (const auto& j : neighbor_ideals(o, 3)) {
    QuatElt gen = principal_generator(o, j);
    CHECK(quat_nrd(o.alg, gen) == 3);
    CHECK(mat_eq(hnf(to_int(right_rep(o, gen))).H, j.basis));
  }
}

TEST_CASE("Hurwitz base level: multiplication-table presentation") {
  GroupLevel base = quat_base_level(hurwitz_order());
  CHECK(base.pres.generators.size() == 23);
  CHECK(base.pres.relators.size() == 23 * 23);
  CHECK(verify_level(base).all_pass());
}

TEST_CASE("Hurwitz S={3}: minus-type tree level") {
  QuatOrder o = hurwitz_order();
  GroupLevel level = quat_s_presentation(o, {3});
  CHECK(level.primes == std::vector<long>{3});
  // Single fused edge orbit, minus type, with lambda of reduced norm 3.
  REQUIRE(level.qext);
  CHECK(level.qext->orbit_sizes == std::vector<int>{4});
  REQUIRE(level.qext->edges.size() == 1);
  CHECK(level.qext->edges[0].minus);
  QuatElt lambda = rep_to_element(o, level.qext->edges[0].w_image);
  CHECK(quat_nrd(o.alg, lambda) == 3);
  // The witness reverses the edge: O * lambda^2 = 3 O.
  RatMat sq = level.qext->edges[0].w_image * level.qext->edges[0].w_image;
  CHECK(is_integral(sq));
  CHECK(mat_eq(hnf(to_int(sq)).H, IntMat(Int(3) * int_identity(4))));

  CHECK(verify_level(level).all_pass());
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 1);
}

TEST_CASE("Hurwitz S={2}: ramified degenerate level") {
  QuatOrder o = hurwitz_order();
  GroupLevel level = quat_s_presentation(o, {2});
  REQUIRE(level.qext);
  CHECK(level.qext->ramified);
  REQUIRE(level.qext->edges.size() == 1);
  QuatElt lambda = rep_to_element(o, level.qext->edges[0].w_image);
  CHECK(quat_nrd(o.alg, lambda) == 2);
  CHECK(verify_level(level).all_pass());
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 1);
}

TEST_CASE("unit orbit decomposition on the p=5 link is recorded") {
  GroupLevel level = quat_s_presentation(hurwitz_order(), {5});
  REQUIRE(level.qext);
  CHECK(level.qext->orbit_sizes == std::vector<int>{6});
  CHECK(level.qext->edges.size() == 1);
}

TEST_CASE("Hurwitz S={3,5}: two-step extension with round trips") {
  QuatOrder o = hurwitz_order();
  GroupLevel level = quat_s_presentation(o, {3, 5});
  CHECK(level.primes == std::vector<long>{3, 5});
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 2);

  std::mt19937_64 rng(23);
  const auto& names = level.pres.generators;
  for (int trial = 0; trial < 20; ++trial) {
    RatMat g = rat_identity(4);
    for (int s = 0; s < 10; ++s) {
      const RatMat& img = level.pres.images.at(names[rng() % names.size()]);
      g = g * (rng() % 2 ? img : rat_inverse(img));
    }
    Word w = rewrite(level, g);
    CHECK(mat_eq(evaluate(w, level.pres.images, 4), g));
  }
}

TEST_CASE("abelian invariants independent of the neighbor chosen as rep") {
  QuatOrder o = hurwitz_order();
  GroupLevel ref = quat_s_presentation(o, {3}, 0);
  auto want = abelian_invariants(ref.pres);
  for (int rot = 1; rot < 4; ++rot) {
    GroupLevel variant = quat_s_presentation(o, {3}, rot);
    CHECK(verify_level(variant).all_pass());
    CHECK(abelian_invariants(variant.pres) == want);
  }
}

TEST_CASE("mixed ramified/split towers in both orders") {
  QuatOrder o = hurwitz_order();
  GroupLevel a = quat_s_presentation(o, {2, 3});
  CHECK(verify_level(a).all_pass());
  GroupLevel b = quat_s_presentation(o, {3, 2});
  CHECK(verify_level(b).all_pass());
  AbelianInvariants ia = abelian_invariants(a.pres);
  CHECK(ia.free_rank == 2);
  CHECK(ia == abelian_invariants(b.pres));

  std::mt19937_64 rng(41);
  for (const GroupLevel* level : {&a, &b}) {
    const auto& names = level->pres.generators;
    for (int trial = 0; trial < 10; ++trial) {
      RatMat g = rat_identity(4);
      for (int s = 0; s < 8; ++s) {
        const RatMat& img = level->pres.images.at(names[rng() % names.size()]);
        g = g * (rng() % 2 ? img : rat_inverse(img));
      }
      Word w = rewrite(*level, g);
      CHECK(mat_eq(evaluate(w, level->pres.images, 4), g));
    }
  }
}

TEST_CASE("non-maximal and indefinite orders are rejected") {
  CHECK_THROWS_AS(quat_s_presentation(lipschitz_order(), {3}), std::invalid_argument);
  QuatAlg indef{Rat(2), Rat(3)};
  CHECK_THROWS_AS(quat_base_level(make_order(indef, rat_identity(4))),
                  std::invalid_argument);
}
