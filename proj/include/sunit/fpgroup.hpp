#pragma once

#include "sunit/word.hpp"

namespace sunit {

/// Coset table over the presentation's generators; column 2i is
/// generator i, column 2i+1 its inverse.  Transitions use -1 for
/// undefined entries (complete tables have none).
struct CosetTable {
  std::vector<std::string> generators;
  long num_cosets = 0;
  bool complete = false;
  std::vector<std::vector<long>> tab;

  long column(const std::string& gen, int exp) const;
  long apply(long coset, const Word& w) const;
  std::string flat_key() const;
};

struct coset_limit_exceeded : std::runtime_error {
  explicit coset_limit_exceeded(const std::string& what) : std::runtime_error(what) {}
};

/// HLT coset enumeration over the cosets of <subgens>.  Deterministic
/// for a fixed input order.  Throws coset_limit_exceeded when more than
/// max_cosets cosets would be allocated (likely infinite or large index
/// -- not a proof).
CosetTable todd_coxeter(const Presentation& p, const std::vector<Word>& subgens,
                        long max_cosets);

struct LowIndexEntry {
  CosetTable table;
  bool is_normal = false;
  // Abelian invariants of the finite quotient; only for normal entries.
  AbelianInvariants quotient_invariants;
  long quotient_order = 0;
};

/// All subgroups of index <= max_index up to conjugacy, by coset-table
/// backtracking with canonical-basepoint pruning.
std::vector<LowIndexEntry> low_index_subgroups(const Presentation& p, int max_index,
                                               int cap = 15);

/// Invariant factors of a finite abelian group given by its regular
/// multiplication table (mult[a][b] = index of product).
AbelianInvariants abelian_group_invariants(const std::vector<std::vector<int>>& mult);

} // namespace sunit
