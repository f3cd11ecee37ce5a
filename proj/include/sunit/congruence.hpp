#pragma once

#include "sunit/engine.hpp"

namespace sunit {

/// Generator images over Z/q with every relator re-verified in the
/// quotient.
struct FiniteImage {
  long q = 0;
  GroupLevel::Kind kind = GroupLevel::Kind::matrix;
  int n = 0;
  std::vector<std::pair<std::string, FpMat>> gens;
};

/// Closure cap; the SUNIT_CLOSURE_CAP environment variable overrides the
/// default of 5e6 elements.
long closure_cap_default();

/// Entry-wise reduction (denominators inverted mod q); q must be prime
/// and coprime to S.  Relator failure in the quotient is a hard error.
FiniteImage reduce_mod_q(const GroupLevel& level, long q);

/// Order of the generated matrix group by breadth-first closure.
long finite_group_order(const FiniteImage& img, long cap = closure_cap_default());

Int gl_order(int n, long q);
Int sl_order(int n, long q);

struct CongruenceProbe {
  long q = 0;
  bool relators_hold = false;
  long image_order = 0;
  long special_order = 0; // determinant-one resp. norm-one sub-image
  Int expected_special;   // |SL_n(F_q)| (split residue ring)
  bool strong_approximation = false;
};

CongruenceProbe congruence_probe(const GroupLevel& level, long q,
                                 long cap = closure_cap_default());

struct NormalScanEntry {
  long index = 0;
  long quotient_order = 0;
  AbelianInvariants quotient_invariants;
  std::vector<long> order_primes;
  bool flagged = false;       // quotient order has a prime outside the predicted set
  long congruence_modulus = 0; // smallest modulus the coset action factors through
};

struct NormalScanReport {
  int max_index = 0;
  std::vector<long> predicted_primes;
  std::vector<NormalScanEntry> entries;
  bool any_flagged = false;
};

/// Scans the projectivized presentation (central scalars killed, per the
/// congruence-property protocol) for normal subgroups of index up to
/// max_index; flagging is advisory, consistent-with-CSP only.
NormalScanReport normal_scan(const GroupLevel& level, int max_index,
                             const std::vector<long>& predicted_primes,
                             long cap = closure_cap_default());

} // namespace sunit
