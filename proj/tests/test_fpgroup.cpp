#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sunit/fpgroup.hpp"

#include <map>
#include <set>

using namespace sunit;

namespace {

Presentation s3_presentation() {
  Presentation p;
  p.generators = {"x", "y"};
  p.relators = {Word::parse("x^2"), Word::parse("y^2"), Word::parse("x*y*x*y*x*y")};
  return p;
}

// Independent oracle for small indices: enumerate homomorphisms to the
// symmetric group S_k acting transitively on {0..k-1}, collect point
// stabilizers up to conjugacy via standardized tables.
int count_classes_by_homs(const Presentation& p, int index) {
  const int g = static_cast<int>(p.generators.size());
  std::vector<std::vector<int>> perms;
  std::vector<int> base(index);
  for (int i = 0; i < index; ++i) base[i] = i;
  std::vector<int> cur = base;
  // All permutations of degree `index`.
  std::sort(cur.begin(), cur.end());
  do {
    perms.push_back(cur);
  } while (std::next_permutation(cur.begin(), cur.end()));

  auto apply_word = [&](const Word& w, const std::map<std::string, int>& assign,
                        int point) {
    int c = point;
    for (const Letter& l : w.letters()) {
      const std::vector<int>& perm = perms[static_cast<std::size_t>(assign.at(l.gen))];
      if (l.exp == 1) {
        c = perm[static_cast<std::size_t>(c)];
      } else {
        for (int t = 0; t < index; ++t)
          if (perm[static_cast<std::size_t>(t)] == c) { c = t; break; }
      }
    }
    return c;
  };

  std::set<std::string> tables;
  std::vector<int> choice(static_cast<std::size_t>(g), 0);
  const int np = static_cast<int>(perms.size());
  for (;;) {
    std::map<std::string, int> assign;
    for (int i = 0; i < g; ++i) assign[p.generators[static_cast<std::size_t>(i)]] = choice[static_cast<std::size_t>(i)];
    bool ok = true;
    for (const Word& r : p.relators) {
      for (int pt = 0; pt < index && ok; ++pt)
        if (apply_word(r, assign, pt) != pt) ok = false;
      if (!ok) break;
    }
    if (ok) {
      // Transitivity from point 0.
      std::set<int> orbit{0};
      std::vector<int> frontier{0};
      while (!frontier.empty()) {
        int pt = frontier.back();
        frontier.pop_back();
        for (int i = 0; i < g; ++i) {
          int q = perms[static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])][static_cast<std::size_t>(pt)];
          if (orbit.insert(q).second) frontier.push_back(q);
        }
      }
      if (static_cast<int>(orbit.size()) == index) {
        // Canonical table: BFS relabel from each basepoint, keep minimum.
        std::string best;
        for (int basept = 0; basept < index; ++basept) {
          std::vector<int> label(static_cast<std::size_t>(index), -1);
          std::vector<int> order{basept};
          label[static_cast<std::size_t>(basept)] = 0;
          for (std::size_t qi = 0; qi < order.size(); ++qi)
            for (int i = 0; i < g; ++i) {
              int to = perms[static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])][static_cast<std::size_t>(order[qi])];
              if (label[static_cast<std::size_t>(to)] < 0) {
                label[static_cast<std::size_t>(to)] = static_cast<int>(order.size());
                order.push_back(to);
              }
            }
          std::string key;
          for (int pt : order)
            for (int i = 0; i < g; ++i)
              key += std::to_string(label[static_cast<std::size_t>(
                         perms[static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])][static_cast<std::size_t>(pt)])]) +
                     ",";
          if (best.empty() || key < best) best = key;
        }
        tables.insert(best);
      }
    }
    int i = 0;
    while (i < g && ++choice[static_cast<std::size_t>(i)] == np) choice[static_cast<std::size_t>(i++)] = 0;
    if (i == g) break;
  }
  return static_cast<int>(tables.size());
}

} // namespace

TEST_CASE("todd_coxeter: index of <x> in S3 is 3") {
  auto table = todd_coxeter(s3_presentation(), {Word::parse("x")}, 1000);
  CHECK(table.complete);
  CHECK(table.num_cosets == 3);
}

TEST_CASE("todd_coxeter: full generator subgroup has index 1") {
  auto table = todd_coxeter(s3_presentation(), {Word::parse("x"), Word::parse("y")}, 1000);
  CHECK(table.num_cosets == 1);
}

TEST_CASE("todd_coxeter: trivial subgroup of an infinite group overflows") {
  Presentation p;
  p.generators = {"a", "b"};
  p.relators = {Word::parse("a^4"), Word::parse("b^6"), Word::parse("a^2*b^-3")};
  CHECK_THROWS_AS(todd_coxeter(p, {}, 1000), coset_limit_exceeded);
}

TEST_CASE("todd_coxeter: finite quotient orders") {
  // S3 itself via the trivial subgroup.
  auto table = todd_coxeter(s3_presentation(), {}, 1000);
  CHECK(table.num_cosets == 6);
  // Index independent of generator listing order.
  Presentation p = s3_presentation();
  std::swap(p.generators[0], p.generators[1]);
  auto table2 = todd_coxeter(p, {Word::parse("x")}, 1000);
  CHECK(table2.num_cosets == 3);
}

TEST_CASE("low_index_subgroups: S3 classes at indices 1,2,3") {
  auto entries = low_index_subgroups(s3_presentation(), 3);
  std::map<long, int> by_index;
  for (const auto& e : entries) by_index[e.table.num_cosets]++;
  CHECK(by_index[1] == 1);
  CHECK(by_index[2] == 1);
  CHECK(by_index[3] == 1);
  for (const auto& e : entries) {
    if (e.table.num_cosets == 2) {
      CHECK(e.is_normal);
      CHECK(e.quotient_order == 2);
      REQUIRE(e.quotient_invariants.torsion.size() == 1);
      CHECK(e.quotient_invariants.torsion[0] == 2);
    }
    if (e.table.num_cosets == 3) CHECK_FALSE(e.is_normal);
  }
}

TEST_CASE("low_index_subgroups: cyclic group of order 5") {
  Presentation p;
  p.generators = {"a"};
  p.relators = {Word::parse("a^5")};
  auto entries = low_index_subgroups(p, 5);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].table.num_cosets == 1);
  CHECK(entries[1].table.num_cosets == 5);
  CHECK(entries[1].is_normal);
  REQUIRE(entries[1].quotient_invariants.torsion.size() == 1);
  CHECK(entries[1].quotient_invariants.torsion[0] == 5);
}

TEST_CASE("low_index_subgroups: free group of rank 2 up to index 2") {
  Presentation p;
  p.generators = {"a", "b"};
  auto entries = low_index_subgroups(p, 2);
  int idx1 = 0, idx2 = 0;
  for (const auto& e : entries) {
    if (e.table.num_cosets == 1) ++idx1;
    if (e.table.num_cosets == 2) {
      ++idx2;
      CHECK(e.is_normal);
    }
  }
  CHECK(idx1 == 1);
  CHECK(idx2 == 3);
}

TEST_CASE("low_index_subgroups agrees with brute-force homomorphism count") {
  for (const Presentation& p : {s3_presentation(), [] {
         Presentation q;
         q.generators = {"a", "b"};
         q.relators = {Word::parse("a^2"), Word::parse("b^3")};
         return q;
       }()}) {
    auto entries = low_index_subgroups(p, 5);
    std::map<long, int> by_index;
    for (const auto& e : entries) by_index[e.table.num_cosets]++;
    for (int k = 1; k <= 5; ++k) CHECK(by_index[k] == count_classes_by_homs(p, k));
  }
}

TEST_CASE("low_index_subgroups enforces the cap") {
  Presentation p;
  p.generators = {"a"};
  CHECK_THROWS_AS(low_index_subgroups(p, 20), std::invalid_argument);
}

TEST_CASE("abelian_group_invariants recovers C2xC4 from a table") {
  // Z/2 x Z/4 as pairs (a,b), a mod 2, b mod 4, index = a*4+b.
  std::vector<std::vector<int>> mult(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          (((a / 4 + b / 4) % 2) * 4) + ((a % 4 + b % 4) % 4);
  auto inv = abelian_group_invariants(mult);
  REQUIRE(inv.torsion.size() == 2);
  CHECK(inv.torsion[0] == 2);
  CHECK(inv.torsion[1] == 4);
}
