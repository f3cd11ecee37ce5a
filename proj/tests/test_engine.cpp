#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/engine.hpp"

#include <random>

using namespace sunit;

namespace {

RatMat random_level_element(const GroupLevel& level, std::mt19937_64& rng, int len) {
  RatMat g = rat_identity(level.n);
  const auto& names = level.pres.generators;
  for (int s = 0; s < len; ++s) {
    const RatMat& img = level.pres.images.at(names[rng() % names.size()]);
    g = g * (rng() % 2 ? img : rat_inverse(img));
  }
  return g;
}

} // namespace

TEST_CASE("vertex_stabilizer adds a central generator with commutators") {
  GroupLevel gl2 = base_level_matrix(2);
  StabilizerData stab = vertex_stabilizer(gl2, 2);
  CHECK(stab.z_name == "z2");
  CHECK(mat_eq(stab.z_image, detail::rat_scale(rat_identity(2), Rat(2))));
  // Three commutator relators, one per base generator.
  CHECK(stab.pres.relators.size() == gl2.pres.relators.size() + 3);
  CHECK_THROWS_AS(vertex_stabilizer(extend_level(gl2, 2), 2), std::invalid_argument);
}

TEST_CASE("stabilizer_rewrite strips the homothety and rejects bad valuations") {
  GroupLevel gl2 = base_level_matrix(2);
  RatMat t = gl2.pres.images.at("t");
  RatMat h = detail::rat_scale(t, Rat(2)); // 2I * T
  Word w = stabilizer_rewrite(gl2, 2, "z2", h);
  CHECK(w.letters().front().gen == "z2");
  std::map<std::string, RatMat> imgs = gl2.pres.images;
  imgs["z2"] = detail::rat_scale(rat_identity(2), Rat(2));
  CHECK(mat_eq(evaluate(w, imgs, 2), h));

  // v_2(det) = 1 is not divisible by n = 2.
  RatMat bad = rat_mat({{2, 0}, {0, 1}});
  CHECK_THROWS_AS(stabilizer_rewrite(gl2, 2, "z2", bad), std::invalid_argument);
}

TEST_CASE("extend GL_2(Z) by p=2: generators, witness, verified relators") {
  GroupLevel level = extend_level(base_level_matrix(2), 2);
  CHECK(level.pres.generators ==
        std::vector<std::string>{"s", "t", "j", "z2", "w2"});
  CHECK(mat_eq(level.pres.images.at("w2"), rat_mat({{0, 2}, {1, 0}})));
  CHECK(level.primes == std::vector<long>{2});
  VerifyReport rep = verify_level(level);
  CHECK(rep.all_pass());

  // No triangles on a tree; exactly one minus-type edge letter.
  int minus = 0, triangles = 0;
  for (const auto& pv : level.provenance) {
    if (pv.tag == "triangle") ++triangles;
  }
  for (const auto& e : level.mext->edges)
    if (e.minus) ++minus;
  CHECK(triangles == 0);
  CHECK(minus == 1);

  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 1);
}

TEST_CASE("rewrite in GL_2(Z[1/2]): examples and seeded round trips") {
  GroupLevel level = extend_level(base_level_matrix(2), 2);
  CHECK(rewrite(level, rat_identity(2)).empty());

  RatMat g = RatMat::Zero(2, 2);
  g(0, 0) = make_rat(1, 2);
  g(1, 1) = Rat(2);
  Word w = rewrite(level, g);
  CHECK(mat_eq(evaluate(w, level.pres.images, 2), g));

  std::mt19937_64 rng(20240901);
  for (int trial = 0; trial < 100; ++trial) {
    RatMat r = random_level_element(level, rng, 20);
    Word rw = rewrite(level, r);
    CHECK(mat_eq(evaluate(rw, level.pres.images, 2), r));
  }

  RatMat off = rat_mat({{1, 0}, {0, 3}});
  CHECK_THROWS_AS(rewrite(level, off), std::invalid_argument);
}

TEST_CASE("GL_2(Z[1/6]): iterated extension, rank 2, order independence") {
  GroupLevel a = extend_level(extend_level(base_level_matrix(2), 2), 3);
  CHECK(a.primes == std::vector<long>{2, 3});
  CHECK(verify_level(a).all_pass());
  auto inv_a = abelian_invariants(a.pres);
  CHECK(inv_a.free_rank == 2);

  GroupLevel b = extend_level(extend_level(base_level_matrix(2), 3), 2);
  auto inv_b = abelian_invariants(b.pres);
  CHECK(inv_a == inv_b);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    RatMat r = random_level_element(a, rng, 14);
    Word w = rewrite(a, r);
    CHECK(mat_eq(evaluate(w, a.pres.images, 2), r));
  }
}

TEST_CASE("GL_3(Z[1/2]): one triangle relator, verified level") {
  GroupLevel level = extend_level(base_level_matrix(3), 2);
  int triangles = 0;
  for (const auto& pv : level.provenance)
    if (pv.tag == "triangle") ++triangles;
  CHECK(triangles == 1);
  CHECK(verify_level(level).all_pass());
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 1);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    RatMat r = random_level_element(level, rng, 10);
    Word w = rewrite(level, r);
    CHECK(mat_eq(evaluate(w, level.pres.images, 3), r));
  }
}

TEST_CASE("GL_2(Z[1/30]): three-prime tower") {
  GroupLevel level = extend_level(
      extend_level(extend_level(base_level_matrix(2), 2), 3), 5);
  CHECK(level.primes == std::vector<long>{2, 3, 5});
  CHECK(verify_level(level).all_pass());
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 3);

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    RatMat g = random_level_element(level, rng, 12);
    Word w = rewrite(level, g);
    CHECK(mat_eq(evaluate(w, level.pres.images, 2), g));
  }
}

TEST_CASE("GL_4(Z[1/2]): minus witness at the middle index, three triangles") {
  GroupLevel level = extend_level(base_level_matrix(4), 2);
  int minus = 0, triangles = 0;
  for (const auto& e : level.mext->edges)
    if (e.minus) ++minus;
  for (const auto& pv : level.provenance)
    if (pv.tag == "triangle") ++triangles;
  CHECK(minus == 1);
  CHECK(level.mext->edges.size() == 2);
  CHECK(triangles == 3);
  auto inv = abelian_invariants(level.pres);
  CHECK(inv.free_rank == 1);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    RatMat g = random_level_element(level, rng, 8);
    Word w = rewrite(level, g);
    CHECK(mat_eq(evaluate(w, level.pres.images, 4), g));
  }
}

TEST_CASE("verify_level flags exactly the perturbed item") {
  GroupLevel level = extend_level(base_level_matrix(2), 2);
  REQUIRE(verify_level(level).all_pass());

  GroupLevel bad_rel = level;
  bad_rel.pres.relators[2] = bad_rel.pres.relators[2] * Word::letter("t");
  VerifyReport r1 = verify_level(bad_rel);
  int failures = 0;
  for (const auto& e : r1.entries)
    if (!e.pass) {
      ++failures;
      CHECK(e.name.rfind("relator 2", 0) == 0);
    }
  CHECK(failures == 1);

  GroupLevel bad_img = level;
  RatMat tweaked = bad_img.pres.images.at("t");
  tweaked(0, 1) += 1;
  bad_img.pres.images["t"] = tweaked;
  VerifyReport r2 = verify_level(bad_img);
  CHECK_FALSE(r2.all_pass());
  bool roundtrip_flagged = false;
  for (const auto& e : r2.entries)
    if (!e.pass && e.name.rfind("round-trip", 0) == 0) roundtrip_flagged = true;
  CHECK(roundtrip_flagged);
}

TEST_CASE("vertex orbit counts from class-group data") {
  CHECK(vertex_orbit_count(1, 5) == std::pair<long, long>{1, 1});
  CHECK(vertex_orbit_count(2, 2) == std::pair<long, long>{2, 1});
  CHECK(vertex_orbit_count(6, 4) == std::pair<long, long>{2, 3});
  CHECK_THROWS_AS(ensure_single_vertex_orbit(2), std::runtime_error);
  ensure_single_vertex_orbit(1);
}

TEST_CASE("steinitz_orbit_test examples") {
  // Same class: always true.
  CHECK(steinitz_orbit_test({4}, {1}, {1}, {1}, 3));
  // Z/4, p generates, n = 2: <2> = {0, 2} contains the difference 2.
  CHECK(steinitz_orbit_test({4}, {0}, {2}, {1}, 2));
  // Z/3 with n = 3: the subgroup <3*gen> is trivial.
  CHECK_FALSE(steinitz_orbit_test({3}, {0}, {1}, {1}, 3));
  CHECK_THROWS_AS(steinitz_orbit_test({4}, {0}, {0, 1}, {1}, 2), std::invalid_argument);
}
