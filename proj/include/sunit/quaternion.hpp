#pragma once

#include "sunit/engine.hpp"

#include <array>

namespace sunit {

/// Rational quaternion algebra (a,b | Q): basis 1, i, j, k with
/// i^2 = a, j^2 = b, k = ij = -ji.
struct QuatAlg {
  Rat a, b;
  bool definite() const { return a < 0 && b < 0; }
};

/// Element coordinates in the 1, i, j, k basis.
struct QuatElt {
  std::array<Rat, 4> c{Rat(0), Rat(0), Rat(0), Rat(0)};

  static QuatElt one() { return QuatElt{{Rat(1), Rat(0), Rat(0), Rat(0)}}; }
  static QuatElt scalar(const Rat& r) { return QuatElt{{r, Rat(0), Rat(0), Rat(0)}}; }
  bool operator==(const QuatElt& o) const { return c == o.c; }
  std::string str() const;
};

QuatElt quat_add(const QuatElt& x, const QuatElt& y);
QuatElt quat_neg(const QuatElt& x);
QuatElt quat_mul(const QuatAlg& alg, const QuatElt& x, const QuatElt& y);
QuatElt quat_conj(const QuatElt& x);
Rat quat_trd(const QuatElt& x);
Rat quat_nrd(const QuatAlg& alg, const QuatElt& x);
QuatElt quat_inv(const QuatAlg& alg, const QuatElt& x);

/// Hilbert symbol (a, b)_p over Q_p; p = 0 denotes the real place.
int hilbert_symbol(const Rat& a, const Rat& b, long p);

/// Finite primes where (a, b | Q) ramifies.
std::vector<long> ramified_primes(const QuatAlg& alg);

/// An order in a definite rational quaternion algebra, given by a basis
/// whose first element is 1 (rows = coordinates in the 1,i,j,k basis).
struct QuatOrder {
  QuatAlg alg;
  RatMat basis;     // 4x4
  RatMat basis_inv; // cached
  RatMat gram;      // Gram(x,x) = 2 Nrd(x) on order coordinates

  QuatElt element_from_order_coords(const RatMat& row) const;
  RatMat order_coords(const QuatElt& x) const; // 1x4; throws if not in QO
};

/// Validates closure under multiplication and the presence of 1.
QuatOrder make_order(const QuatAlg& alg, const RatMat& basis);

QuatOrder hurwitz_order();
QuatOrder lipschitz_order();

Int reduced_discriminant(const QuatOrder& o);
bool is_maximal(const QuatOrder& o);

/// Matrix of right multiplication by x on order coordinates (row-vector
/// action); integral for x in the order.
RatMat right_rep(const QuatOrder& o, const QuatElt& x);
/// Matrix of left multiplication by x on order coordinates.
RatMat left_rep(const QuatOrder& o, const QuatElt& x);
/// Recovers the element from its right-representation matrix.
QuatElt rep_to_element(const QuatOrder& o, const RatMat& r);

/// All order elements of reduced norm 1, closed under multiplication and
/// inverses; deterministic order.
std::vector<QuatElt> unit_group(const QuatOrder& o);

/// Left ideal lattice, stored as an HNF basis in order coordinates.
struct IdealLattice {
  IntMat basis; // 4x4, HNF
  std::string key() const { return mat_key(basis); }
};

/// All integer vectors y with y * gram * y^T = target in the lattice
/// spanned by the rows of basis (order coordinates); exact arithmetic.
std::vector<IntMat> short_vectors(const RatMat& gram, const Rat& target);

/// The p+1 maximal left sub-ideals of index p^2 at a split prime p;
/// throws for ramified p.
std::vector<IdealLattice> neighbor_ideals(const QuatOrder& o, long p);

/// A generator of reduced norm p with O*x = J (class number one);
/// J = O gives 1, J = pO gives p.
QuatElt principal_generator(const QuatOrder& o, const IdealLattice& j);

/// S = {} level: the finite unit group with its multiplication-table
/// presentation in the regular representation.
GroupLevel quat_base_level(const QuatOrder& o);

/// Iterated tree extension over the listed primes (split primes use the
/// Bruhat-Tits tree, ramified primes the degenerate normalizer step).
/// rep_rotation rotates the canonical neighbor order when picking orbit
/// representatives; any value yields an equivalent presentation.
GroupLevel quat_s_presentation(const QuatOrder& o, const std::vector<long>& primes,
                               int rep_rotation = 0);

} // namespace sunit
