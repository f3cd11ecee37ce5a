#pragma once

#include "sunit/numeric.hpp"

namespace sunit {

struct HnfResult {
  IntMat H; // row-style Hermite normal form, H = U * M
  IntMat U; // unimodular
};

struct SnfResult {
  IntMat D; // Smith normal form, D = U * M * V
  IntMat U; // unimodular, rows x rows
  IntMat V; // unimodular, cols x cols
};

/// Row-style Hermite normal form of a full-row-rank matrix: pivots
/// positive, entries above each pivot reduced into [0, pivot).
/// Throws std::invalid_argument on row-rank deficiency.
HnfResult hnf(const IntMat& m);

/// Smith normal form D = U*M*V with d_1 | d_2 | ... and d_i >= 0.
SnfResult snf(const IntMat& m);

/// Invariant factors > 1 of the Smith form, in divisibility order.
std::vector<Int> invariant_factors(const IntMat& m);

/// Basis (in HNF) of the row lattice of an arbitrary generating matrix;
/// redundant rows allowed.  Returns a rank x cols matrix.
IntMat row_lattice_basis(const IntMat& m);

/// Exact integral inverse of a unimodular matrix.
IntMat unimodular_inverse(const IntMat& u);

} // namespace sunit
