#include "sunit/fpgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace sunit {

long CosetTable::column(const std::string& gen, int exp) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == gen) return 2 * static_cast<long>(i) + (exp < 0 ? 1 : 0);
  throw std::invalid_argument("CosetTable: unknown generator '" + gen + "'");
}

long CosetTable::apply(long coset, const Word& w) const {
  long c = coset;
  for (const Letter& l : w.letters()) {
    c = tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(column(l.gen, l.exp))];
    if (c < 0) throw std::logic_error("CosetTable::apply on incomplete table");
  }
  return c;
}

std::string CosetTable::flat_key() const {
  std::string k;
  for (const auto& row : tab)
    for (long v : row) {
      k += std::to_string(v);
      k += ',';
    }
  return k;
}

namespace {

using ColWord = std::vector<int>;

int inv_col(int x) { return x ^ 1; }

ColWord to_cols(const Word& w, const std::vector<std::string>& gens) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < gens.size(); ++i) index[gens[i]] = static_cast<int>(i);
  ColWord out;
  for (const Letter& l : w.letters()) {
    auto it = index.find(l.gen);
    if (it == index.end())
      throw std::invalid_argument("unknown generator in word: " + l.gen);
    out.push_back(2 * it->second + (l.exp < 0 ? 1 : 0));
  }
  return out;
}

// Standardized copy: cosets renumbered in BFS order from `base`,
// columns visited in fixed order.  Expects a complete table.
std::vector<std::vector<long>> standardize(const std::vector<std::vector<long>>& tab,
                                           long base) {
  const int ncols = static_cast<int>(tab[0].size());
  std::vector<long> label(tab.size(), -1);
  std::vector<long> order;
  label[static_cast<std::size_t>(base)] = 0;
  order.push_back(base);
  for (std::size_t q = 0; q < order.size(); ++q) {
    long c = order[q];
    for (int x = 0; x < ncols; ++x) {
      long d = tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)];
      if (d >= 0 && label[static_cast<std::size_t>(d)] < 0) {
        label[static_cast<std::size_t>(d)] = static_cast<long>(order.size());
        order.push_back(d);
      }
    }
  }
  std::vector<std::vector<long>> out(order.size(), std::vector<long>(ncols, -1));
  for (std::size_t c = 0; c < order.size(); ++c)
    for (int x = 0; x < ncols; ++x) {
      long d = tab[static_cast<std::size_t>(order[c])][static_cast<std::size_t>(x)];
      out[c][static_cast<std::size_t>(x)] = d < 0 ? -1 : label[static_cast<std::size_t>(d)];
    }
  return out;
}

// ---------------------------------------------------------------------
// Todd-Coxeter (HLT) with coincidence processing.

struct Enumerator {
  int ncols;
  long max_cosets;
  std::vector<std::vector<long>> tab;
  std::vector<long> parent; // union-find, parent[c] <= c
  std::deque<long> queue;

  Enumerator(int ncols_, long max_cosets_) : ncols(ncols_), max_cosets(max_cosets_) {
    new_coset();
  }

  long new_coset() {
    if (static_cast<long>(tab.size()) >= max_cosets)
      throw coset_limit_exceeded("todd_coxeter: coset limit of " +
                                 std::to_string(max_cosets) + " exceeded");
    tab.emplace_back(ncols, -1);
    parent.push_back(static_cast<long>(tab.size()) - 1);
    return static_cast<long>(tab.size()) - 1;
  }

  bool live(long c) const { return parent[static_cast<std::size_t>(c)] == c; }

  long rep(long c) {
    long r = c;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    while (parent[static_cast<std::size_t>(c)] != r) {
      long next = parent[static_cast<std::size_t>(c)];
      parent[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  }

  void merge(long a, long b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    queue.push_back(b);
  }

  void coincidence(long a, long b) {
    merge(a, b);
    while (!queue.empty()) {
      long e = queue.front();
      queue.pop_front();
      for (int x = 0; x < ncols; ++x) {
        long f = tab[static_cast<std::size_t>(e)][static_cast<std::size_t>(x)];
        if (f < 0) continue;
        tab[static_cast<std::size_t>(f)][static_cast<std::size_t>(inv_col(x))] = -1;
        long a1 = rep(e), b1 = rep(f);
        long& fwd = tab[static_cast<std::size_t>(a1)][static_cast<std::size_t>(x)];
        if (fwd >= 0) {
          merge(b1, fwd);
        } else {
          long& bwd = tab[static_cast<std::size_t>(b1)][static_cast<std::size_t>(inv_col(x))];
          if (bwd >= 0) {
            merge(a1, bwd);
          } else {
            fwd = b1;
            tab[static_cast<std::size_t>(b1)][static_cast<std::size_t>(inv_col(x))] = a1;
          }
        }
      }
    }
  }

  void scan_and_fill(long start, const ColWord& w) {
    if (w.empty()) return;
    long f = rep(start), b = rep(start);
    long i = 0, j = static_cast<long>(w.size()) - 1;
    for (;;) {
      while (i <= j && tab[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] >= 0)
        f = tab[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i++)])];
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && tab[static_cast<std::size_t>(b)][static_cast<std::size_t>(inv_col(w[static_cast<std::size_t>(j)]))] >= 0)
        b = tab[static_cast<std::size_t>(b)][static_cast<std::size_t>(inv_col(w[static_cast<std::size_t>(j--)]))];
      if (j < i) {
        if (f != b) coincidence(f, b);
        return;
      }
      if (j == i) {
        tab[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = b;
        tab[static_cast<std::size_t>(b)][static_cast<std::size_t>(inv_col(w[static_cast<std::size_t>(i)]))] = f;
        return;
      }
      long c = new_coset();
      tab[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = c;
      tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(inv_col(w[static_cast<std::size_t>(i)]))] = f;
      f = c;
      ++i;
    }
  }
};

} // namespace

CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgens,
                        long max_cosets) {
  p.validate();
  const int ncols = 2 * static_cast<int>(p.generators.size());
  std::vector<ColWord> rels;
  for (const Word& r : p.relators) {
    ColWord cw = to_cols(r, p.generators);
    if (!cw.empty()) rels.push_back(cw);
  }

  Enumerator e(ncols, max_cosets);
  for (const Word& s : subgens) e.scan_and_fill(0, to_cols(s, p.generators));

  for (long c = 0; c < static_cast<long>(e.tab.size()); ++c) {
    if (!e.live(c)) continue;
    for (const ColWord& r : rels) {
      e.scan_and_fill(c, r);
      if (!e.live(c)) break;
    }
    if (!e.live(c)) continue;
    for (int x = 0; x < ncols; ++x) {
      if (e.tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)] >= 0) continue;
      long d = e.new_coset();
      e.tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)] = d;
      e.tab[static_cast<std::size_t>(d)][static_cast<std::size_t>(inv_col(x))] = c;
    }
  }

  // Collapse dead cosets.
  std::vector<std::vector<long>> live;
  std::vector<long> index(e.tab.size(), -1);
  for (long c = 0; c < static_cast<long>(e.tab.size()); ++c)
    if (e.live(c)) {
      index[static_cast<std::size_t>(c)] = static_cast<long>(live.size());
      live.push_back(e.tab[static_cast<std::size_t>(c)]);
    }
  for (auto& row : live)
    for (long& v : row) {
      if (v >= 0) v = index[static_cast<std::size_t>(e.rep(v))];
      if (v < 0) throw std::logic_error("todd_coxeter: incomplete table after closure");
    }

  CosetTable out;
  out.generators = p.generators;
  out.tab = standardize(live, 0);
  out.num_cosets = static_cast<long>(out.tab.size());
  out.complete = true;
  return out;
}

// ---------------------------------------------------------------------
// Low-index subgroups (coset-table backtracking with canonical-basepoint
// pruning).

namespace {

struct LowIndexSearch {
  int ncols;
  long max_index;
  // Cyclic rotations of relators and their inverses, grouped by first column.
  std::vector<std::vector<ColWord>> rot_by_col;

  std::vector<std::vector<long>> tab;
  std::vector<std::pair<long, int>> trail;
  std::vector<std::vector<std::vector<long>>> found;

  LowIndexSearch(int ncols_, long max_index_, const std::vector<ColWord>& rels)
      : ncols(ncols_), max_index(max_index_) {
    rot_by_col.resize(static_cast<std::size_t>(ncols));
    std::set<ColWord> seen;
    for (const ColWord& r : rels) {
      ColWord inv(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) inv[i] = inv_col(r[r.size() - 1 - i]);
      for (const ColWord* w : {&r, static_cast<const ColWord*>(&inv)})
        for (std::size_t k = 0; k < w->size(); ++k) {
          ColWord rot(w->begin() + static_cast<long>(k), w->end());
          rot.insert(rot.end(), w->begin(), w->begin() + static_cast<long>(k));
          if (seen.insert(rot).second)
            rot_by_col[static_cast<std::size_t>(rot[0])].push_back(rot);
        }
    }
    tab.emplace_back(ncols, -1);
  }

  long& cell(long c, int x) {
    return tab[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)];
  }

  // Sets c --x--> d plus its inverse and propagates all relator
  // deductions; false means dead branch.  All changes are trailed.
  bool assign(long c, int x, long d) {
    std::deque<std::pair<long, int>> dirty;
    auto set_edge = [&](long cc, int xx, long dd) -> bool {
      long& fwd = cell(cc, xx);
      long& bwd = cell(dd, inv_col(xx));
      if (fwd >= 0) return fwd == dd;
      if (bwd >= 0 && bwd != cc) return false;
      fwd = dd;
      trail.emplace_back(cc, xx);
      dirty.emplace_back(cc, xx);
      if (bwd < 0) {
        bwd = cc;
        trail.emplace_back(dd, inv_col(xx));
        dirty.emplace_back(dd, inv_col(xx));
      }
      return true;
    };
    if (!set_edge(c, x, d)) return false;
    while (!dirty.empty()) {
      auto [e, y] = dirty.front();
      dirty.pop_front();
      for (const ColWord& rot : rot_by_col[static_cast<std::size_t>(y)]) {
        long f = e, b = e;
        long i = 0, j = static_cast<long>(rot.size()) - 1;
        while (i <= j && cell(f, rot[static_cast<std::size_t>(i)]) >= 0)
          f = cell(f, rot[static_cast<std::size_t>(i++)]);
        if (i > j) {
          if (f != b) return false; // forced coincidence
          continue;
        }
        while (j > i && cell(b, inv_col(rot[static_cast<std::size_t>(j)])) >= 0)
          b = cell(b, inv_col(rot[static_cast<std::size_t>(j--)]));
        if (j == i) {
          if (!set_edge(f, rot[static_cast<std::size_t>(i)], b)) return false;
        }
      }
    }
    return true;
  }

  bool canonical() const {
    auto base0 = standardize(tab, 0);
    for (long b = 1; b < static_cast<long>(tab.size()); ++b)
      if (standardize(tab, b) < base0) return false;
    return true;
  }

  void search() {
    long c = -1;
    int x = -1;
    for (long cc = 0; cc < static_cast<long>(tab.size()) && c < 0; ++cc)
      for (int xx = 0; xx < ncols; ++xx)
        if (tab[static_cast<std::size_t>(cc)][static_cast<std::size_t>(xx)] < 0) {
          c = cc;
          x = xx;
          break;
        }
    if (c < 0) {
      if (canonical()) found.push_back(standardize(tab, 0));
      return;
    }
    const long ncur = static_cast<long>(tab.size());
    for (long d = 0; d <= ncur; ++d) {
      if (d == ncur) {
        if (ncur >= max_index) break;
        tab.emplace_back(ncols, -1);
      } else if (cell(d, inv_col(x)) >= 0) {
        continue;
      }
      const std::size_t mark = trail.size();
      if (assign(c, x, d)) search();
      while (trail.size() > mark) {
        auto [cc, xx] = trail.back();
        trail.pop_back();
        cell(cc, xx) = -1;
      }
      if (d == ncur) tab.pop_back();
    }
  }
};

std::string perm_key(const std::vector<long>& v) {
  std::string k;
  for (long x : v) {
    k += std::to_string(x);
    k += ',';
  }
  return k;
}

} // namespace

AbelianInvariants abelian_group_invariants(const std::vector<std::vector<int>>& mult) {
  const int m = static_cast<int>(mult.size());
  AbelianInvariants out;
  if (m <= 1) return out;

  // Element orders; identity sits at index 0.
  std::vector<int> order(static_cast<std::size_t>(m), 1);
  for (int a = 1; a < m; ++a) {
    int x = 0, k = 0;
    do {
      x = mult[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
      ++k;
      if (k > m) throw std::logic_error("abelian_group_invariants: bad table");
    } while (x != 0);
    order[static_cast<std::size_t>(a)] = k;
  }

  std::map<long, std::vector<int>> primary; // prime -> partition
  int mm = m;
  for (long q = 2; q <= mm; ++q) {
    if (mm % q != 0) continue;
    std::vector<int> s{0};
    for (int j = 1;; ++j) {
      long qj = 1;
      for (int t = 0; t < j; ++t) qj *= q;
      long count = 0;
      for (int a = 0; a < m; ++a)
        if (qj % order[static_cast<std::size_t>(a)] == 0) ++count;
      int e = 0;
      while (count % q == 0) { count /= q; ++e; }
      if (count != 1)
        throw std::logic_error("abelian_group_invariants: non-prime-power torsion count");
      if (e == s.back()) break;
      s.push_back(e);
    }
    // Number of partition parts >= j is s_j - s_{j-1}.
    std::vector<int> parts_ge;
    for (std::size_t j = 1; j < s.size(); ++j) parts_ge.push_back(s[j] - s[j - 1]);
    std::vector<int> lambda;
    int nparts = parts_ge.empty() ? 0 : parts_ge[0];
    for (int i = 1; i <= nparts; ++i) {
      int li = 0;
      for (std::size_t j = 0; j < parts_ge.size(); ++j)
        if (parts_ge[j] >= i) li = static_cast<int>(j + 1);
      lambda.push_back(li);
    }
    if (!lambda.empty()) primary[q] = lambda;
    while (mm % q == 0) mm /= q;
  }

  std::size_t chain = 0;
  for (const auto& [q, lambda] : primary) chain = std::max(chain, lambda.size());
  std::vector<Int> factors(chain, Int(1));
  for (const auto& [q, lambda] : primary)
    for (std::size_t t = 0; t < lambda.size(); ++t)
      factors[t] *= int_pow(Int(q), static_cast<unsigned long>(lambda[t]));
  std::reverse(factors.begin(), factors.end()); // ascending divisibility
  for (const Int& f : factors)
    if (f > 1) out.torsion.push_back(f);
  return out;
}

std::vector<LowIndexEntry> low_index_subgroups(const Presentation& p, int max_index,
                                               int cap) {
  p.validate();
  if (max_index > cap)
    throw std::invalid_argument("low_index_subgroups: max_index exceeds cap of " +
                                std::to_string(cap));
  const int ncols = 2 * static_cast<int>(p.generators.size());
  std::vector<ColWord> rels;
  for (const Word& r : p.relators) {
    ColWord cw = to_cols(r, p.generators);
    if (!cw.empty()) rels.push_back(cw);
  }

  LowIndexSearch s(ncols, max_index, rels);
  s.search();

  std::vector<LowIndexEntry> out;
  for (const auto& tab : s.found) {
    LowIndexEntry entry;
    entry.table.generators = p.generators;
    entry.table.tab = tab;
    entry.table.num_cosets = static_cast<long>(tab.size());
    entry.table.complete = true;

    const long n = entry.table.num_cosets;
    auto base0 = standardize(tab, 0);
    entry.is_normal = true;
    for (long b = 1; b < n && entry.is_normal; ++b)
      if (standardize(tab, b) != base0) entry.is_normal = false;

    if (entry.is_normal) {
      // The quotient acts regularly; enumerate it as permutations.
      std::vector<std::vector<long>> elems;
      std::map<std::string, int> index;
      std::vector<long> id(static_cast<std::size_t>(n));
      std::iota(id.begin(), id.end(), 0);
      elems.push_back(id);
      index[perm_key(id)] = 0;
      for (std::size_t q = 0; q < elems.size(); ++q)
        for (int x = 0; x < ncols; ++x) {
          std::vector<long> img(static_cast<std::size_t>(n));
          for (long c = 0; c < n; ++c)
            img[static_cast<std::size_t>(c)] =
                tab[static_cast<std::size_t>(elems[q][static_cast<std::size_t>(c)])]
                   [static_cast<std::size_t>(x)];
          if (!index.count(perm_key(img))) {
            index[perm_key(img)] = static_cast<int>(elems.size());
            elems.push_back(img);
          }
        }
      entry.quotient_order = static_cast<long>(elems.size());

      auto compose = [n](const std::vector<long>& a, const std::vector<long>& b) {
        std::vector<long> r(static_cast<std::size_t>(n));
        for (long c = 0; c < n; ++c)
          r[static_cast<std::size_t>(c)] =
              b[static_cast<std::size_t>(a[static_cast<std::size_t>(c)])];
        return r;
      };
      auto invert = [n](const std::vector<long>& a) {
        std::vector<long> r(static_cast<std::size_t>(n));
        for (long c = 0; c < n; ++c)
          r[static_cast<std::size_t>(a[static_cast<std::size_t>(c)])] = c;
        return r;
      };

      // Derived subgroup: closure of all commutators under products.
      std::map<std::string, int> dindex;
      std::vector<std::vector<long>> derived{id};
      dindex[perm_key(id)] = 0;
      for (const auto& a : elems)
        for (const auto& b : elems) {
          auto comm = compose(compose(a, b), compose(invert(a), invert(b)));
          if (!dindex.count(perm_key(comm))) {
            dindex[perm_key(comm)] = static_cast<int>(derived.size());
            derived.push_back(comm);
          }
        }
      for (std::size_t q = 0; q < derived.size(); ++q)
        for (std::size_t t = 1; t < derived.size(); ++t) {
          auto prod = compose(derived[q], derived[t]);
          if (!dindex.count(perm_key(prod))) {
            dindex[perm_key(prod)] = static_cast<int>(derived.size());
            derived.push_back(prod);
          }
        }

      // Abelianization = cosets of the derived subgroup.
      std::map<std::string, int> coset_of;
      std::vector<std::vector<long>> reps;
      for (const auto& g : elems) {
        if (coset_of.count(perm_key(g))) continue;
        int cid = static_cast<int>(reps.size());
        reps.push_back(g);
        for (const auto& dd : derived) coset_of[perm_key(compose(dd, g))] = cid;
      }
      const int m = static_cast<int>(reps.size());
      std::vector<std::vector<int>> mult(static_cast<std::size_t>(m),
                                         std::vector<int>(static_cast<std::size_t>(m)));
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
              coset_of.at(perm_key(compose(reps[static_cast<std::size_t>(a)],
                                           reps[static_cast<std::size_t>(b)])));
      entry.quotient_invariants = abelian_group_invariants(mult);
    }
    out.push_back(std::move(entry));
  }

  std::sort(out.begin(), out.end(), [](const LowIndexEntry& a, const LowIndexEntry& b) {
    if (a.table.num_cosets != b.table.num_cosets)
      return a.table.num_cosets < b.table.num_cosets;
    return a.table.tab < b.table.tab;
  });
  return out;
}

} // namespace sunit
