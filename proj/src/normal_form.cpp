#include "sunit/normal_form.hpp"

namespace sunit {

namespace {

// Quotient rounded toward nearest integer; keeps Euclidean
// combinations small.
Int round_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * r >= abs(b)) q += 1;
  return q;
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Echelonizes m in place via unimodular row operations, mirroring them
// on u; returns the pivot count.
Eigen::Index echelonize(IntMat& m, IntMat& u) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    // Euclidean reduction of column `col` among rows >= row.
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index r = row; r < rows; ++r) {
        if (m(r, col) == 0) continue;
        if (best < 0 || abs(m(r, col)) < abs(m(best, col))) best = r;
      }
      if (best < 0) break; // column clear
      if (best != row) {
        m.row(best).swap(m.row(row));
        u.row(best).swap(u.row(row));
      }
      bool clean = true;
      for (Eigen::Index r = row + 1; r < rows; ++r) {
        if (m(r, col) == 0) continue;
        Int q = round_div(m(r, col), m(row, col));
        if (q != 0) {
          m.row(r) -= q * m.row(row);
          u.row(r) -= q * u.row(row);
        }
        if (m(r, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (row < rows && m(row, col) != 0) {
      if (m(row, col) < 0) {
        m.row(row) = -m.row(row);
        u.row(row) = -u.row(row);
      }
      // Reduce entries above the pivot into [0, pivot).
      for (Eigen::Index r = 0; r < row; ++r) {
        Int q = floor_div(m(r, col), m(row, col));
        if (q != 0) {
          m.row(r) -= q * m.row(row);
          u.row(r) -= q * u.row(row);
        }
      }
      ++row;
    }
  }
  return row;
}

} // namespace

HnfResult hnf(const IntMat& m) {
  IntMat h = m;
  IntMat u = int_identity(m.rows());
  Eigen::Index rank = echelonize(h, u);
  if (rank < m.rows())
    throw std::invalid_argument("hnf: input does not have full row rank");
  return {h, u};
}

IntMat row_lattice_basis(const IntMat& m) {
  IntMat h = m;
  IntMat u = int_identity(m.rows());
  Eigen::Index rank = echelonize(h, u);
  return h.topRows(rank);
}

SnfResult snf(const IntMat& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  IntMat d = m;
  IntMat u = int_identity(rows);
  IntMat v = int_identity(cols);
  const Eigen::Index t_max = std::min(rows, cols);

  for (Eigen::Index t = 0; t < t_max; ++t) {
    // Locate a nonzero entry of minimal absolute value in the block.
    Eigen::Index pi = -1, pj = -1;
    for (Eigen::Index i = t; i < rows; ++i)
      for (Eigen::Index j = t; j < cols; ++j) {
        if (d(i, j) == 0) continue;
        if (pi < 0 || abs(d(i, j)) < abs(d(pi, pj))) { pi = i; pj = j; }
      }
    if (pi < 0) break; // block is zero

    for (;;) {
      if (pi != t) { d.row(pi).swap(d.row(t)); u.row(pi).swap(u.row(t)); }
      if (pj != t) { d.col(pj).swap(d.col(t)); v.col(pj).swap(v.col(t)); }

      bool dirty = false;
      for (Eigen::Index i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        Int q = round_div(d(i, t), d(t, t));
        if (q != 0) { d.row(i) -= q * d.row(t); u.row(i) -= q * u.row(t); }
        if (d(i, t) != 0) dirty = true;
      }
      for (Eigen::Index j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Int q = round_div(d(t, j), d(t, t));
        if (q != 0) { d.col(j) -= q * d.col(t); v.col(j) -= q * v.col(t); }
        if (d(t, j) != 0) dirty = true;
      }
      if (!dirty) {
        // Row and column clear; enforce divisibility against the rest.
        bool fixed = true;
        for (Eigen::Index i = t + 1; i < rows && fixed; ++i)
          for (Eigen::Index j = t + 1; j < cols && fixed; ++j)
            if (d(i, j) % d(t, t) != 0) {
              d.row(t) += d.row(i);
              u.row(t) += u.row(i);
              fixed = false;
            }
        if (fixed) break;
      }
      // Re-pick the minimal pivot in the block and continue.
      pi = -1; pj = -1;
      for (Eigen::Index i = t; i < rows; ++i)
        for (Eigen::Index j = t; j < cols; ++j) {
          if (d(i, j) == 0) continue;
          if (pi < 0 || abs(d(i, j)) < abs(d(pi, pj))) { pi = i; pj = j; }
        }
    }
    if (d(t, t) < 0) { d.row(t) = -d.row(t); u.row(t) = -u.row(t); }
  }
  return {d, u, v};
}

std::vector<Int> invariant_factors(const IntMat& m) {
  SnfResult s = snf(m);
  std::vector<Int> out;
  const Eigen::Index t_max = std::min(s.D.rows(), s.D.cols());
  for (Eigen::Index t = 0; t < t_max; ++t)
    if (s.D(t, t) > 1) out.push_back(s.D(t, t));
  return out;
}

IntMat unimodular_inverse(const IntMat& u) {
  RatMat inv = rat_inverse(to_rat(u));
  if (!is_integral(inv))
    throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
  return to_int(inv);
}

} // namespace sunit
