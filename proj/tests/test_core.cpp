#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/modp.hpp"
#include "sunit/normal_form.hpp"

#include <random>
#include <set>

using namespace sunit;

namespace {

bool is_unimodular(const IntMat& u) {
  Rat d = int_det(u);
  return d == 1 || d == -1;
}

// Oracle: every row of a lies in the row lattice of b (integral solve).
bool rows_in_lattice(const IntMat& a, const IntMat& b) {
  RatMat binv = rat_inverse(to_rat(b));
  RatMat coeff = to_rat(a) * binv;
  return is_integral(coeff);
}

bool in_hnf(const IntMat& h) {
  Eigen::Index prev_piv = -1;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    Eigen::Index piv = -1;
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      if (h(r, c) != 0) { piv = c; break; }
    if (piv <= prev_piv) return false;
    if (h(r, piv) <= 0) return false;
    for (Eigen::Index r2 = 0; r2 < r; ++r2)
      if (h(r2, piv) < 0 || h(r2, piv) >= h(r, piv)) return false;
    prev_piv = piv;
  }
  return true;
}

IntMat random_unimodular(int n, std::mt19937_64& rng) {
  IntMat u = int_identity(n);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int step = 0; step < 8; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    u.row(i) += Int(coef(rng)) * u.row(j);
  }
  return u;
}

} // namespace

TEST_CASE("hnf identity and diagonal fixed points") {
  IntMat id = int_identity(2);
  auto r = hnf(id);
  CHECK(mat_eq(r.H, id));
  CHECK(mat_eq(r.U, id));

  IntMat d = int_mat({{2, 0}, {0, 3}});
  auto r2 = hnf(d);
  CHECK(mat_eq(r2.H, d));
}

TEST_CASE("hnf of [[4,6],[2,4]] preserves the row lattice") {
  IntMat m = int_mat({{4, 6}, {2, 4}});
  auto r = hnf(m);
  CHECK(mat_eq(r.H, IntMat(r.U * m)));
  CHECK(is_unimodular(r.U));
  CHECK(in_hnf(r.H));
  CHECK(abs(int_det(r.H).get_num()) == 4);
  // Mutual lattice membership, both directions.
  CHECK(rows_in_lattice(r.H, m));
  CHECK(rows_in_lattice(m, r.H));
}

TEST_CASE("hnf rejects rank deficiency") {
  IntMat m = int_mat({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(hnf(m), std::invalid_argument);
}

TEST_CASE("hnf idempotence and unimodular invariance") {
  std::mt19937_64 rng(20240901);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    IntMat m(n, n);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    } while (int_det(m) == 0);
    auto r = hnf(m);
    CHECK(mat_eq(hnf(r.H).H, r.H));
    IntMat u = random_unimodular(n, rng);
    CHECK(mat_eq(hnf(IntMat(u * m)).H, r.H));
  }
}

TEST_CASE("snf of [[4,0],[0,6],[2,-3]] has invariant factors 1, 12") {
  // Oracle: gcd of entries is 1; gcd of 2x2 minors is 12.
  IntMat m = int_mat({{4, 0}, {0, 6}, {2, -3}});
  auto s = snf(m);
  CHECK(mat_eq(s.D, IntMat(s.U * m * s.V)));
  CHECK(is_unimodular(s.U));
  CHECK(is_unimodular(s.V));
  CHECK(s.D(0, 0) == 1);
  CHECK(s.D(1, 1) == 12);
  std::vector<Int> f = invariant_factors(m);
  REQUIRE(f.size() == 1);
  CHECK(f[0] == 12);
}

TEST_CASE("snf zero matrix and divisibility reorder") {
  IntMat z = IntMat::Zero(2, 3);
  auto s = snf(z);
  CHECK(mat_eq(s.D, z));

  IntMat m = int_mat({{5, 0}, {0, 1}});
  auto s2 = snf(m);
  CHECK(s2.D(0, 0) == 1);
  CHECK(s2.D(1, 1) == 5);
}

TEST_CASE("snf transformation identity and chain on random matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-12, 12);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng() % 4), c = 1 + static_cast<int>(rng() % 4);
    IntMat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = entry(rng);
    auto s = snf(m);
    CHECK(mat_eq(s.D, IntMat(s.U * m * s.V)));
    CHECK(is_unimodular(s.U));
    CHECK(is_unimodular(s.V));
    Eigen::Index t_max = std::min<Eigen::Index>(r, c);
    for (Eigen::Index t = 0; t + 1 < t_max; ++t) {
      CHECK(s.D(t, t) >= 0);
      if (s.D(t + 1, t + 1) != 0) {
        REQUIRE(s.D(t, t) != 0);
        CHECK(s.D(t + 1, t + 1) % s.D(t, t) == 0);
      }
    }
  }
}

TEST_CASE("gaussian binomial values") {
  CHECK(gaussian_binomial(3, 0, Int(2)) == 1);
  CHECK(gaussian_binomial(2, 1, Int(3)) == 4);
  CHECK(gaussian_binomial(4, 2, Int(2)) == 35);
}

TEST_CASE("subspace enumeration counts and uniqueness") {
  CHECK(enumerate_subspaces(2, 1, 2).size() == 3);
  CHECK(enumerate_subspaces(2, 1, 3).size() == 4);
  CHECK(enumerate_subspaces(3, 2, 2).size() == 7);

  for (int n = 2; n <= 4; ++n)
    for (int k = 1; k < n; ++k)
      for (long p : {2L, 3L, 5L}) {
        auto subs = enumerate_subspaces(n, k, p);
        CHECK(Int(static_cast<long>(subs.size())) == gaussian_binomial(n, k, Int(p)));
        std::set<std::string> keys;
        for (const auto& s : subs) {
          CHECK(mat_eq(DenseMat<std::int64_t>(rref(s).m), DenseMat<std::int64_t>(s.m)));
          keys.insert(s.key());
        }
        CHECK(keys.size() == subs.size());
      }
}

TEST_CASE("subspace enumeration rejects bad dimensions") {
  CHECK_THROWS_AS(enumerate_subspaces(3, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_subspaces(3, 3, 2), std::invalid_argument);
}
