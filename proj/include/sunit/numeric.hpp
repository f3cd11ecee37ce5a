#pragma once

#include <Eigen/Dense>
#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

// Eigen needs NumTraits for the GMP scalar types.  Exact arithmetic:
// epsilon and dummy_precision are zero.
namespace Eigen {

template <> struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  typedef mpz_class Real;
  typedef mpz_class NonInteger;
  typedef mpz_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 30,
    MulCost = 50
  };
};

template <> struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

} // namespace Eigen

namespace sunit {

using Int = mpz_class;
using Rat = mpq_class;

template <typename Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IntMat = DenseMat<Int>;
using RatMat = DenseMat<Rat>;

/// Exact rational with normalized sign and gcd(num, den) = 1.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("parse_rat: bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline IntMat int_identity(Eigen::Index n) {
  IntMat m = IntMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

inline RatMat rat_identity(Eigen::Index n) {
  RatMat m = RatMat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <typename Scalar>
bool mat_eq(const DenseMat<Scalar>& a, const DenseMat<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

inline bool is_identity(const RatMat& a) {
  if (a.rows() != a.cols()) return false;
  return mat_eq(a, rat_identity(a.rows()));
}

inline RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

inline bool is_integral(const RatMat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

inline IntMat to_int(const RatMat& m) {
  IntMat r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1)
        throw std::invalid_argument("to_int: matrix not integral");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

/// lcm of all entry denominators (1 for an integral matrix).
inline Int denominator_lcm(const RatMat& m) {
  Int l = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Int d = m(i, j).get_den();
      l = lcm(l, d);
    }
  return l;
}

/// p-adic valuation of a nonzero integer.
inline long valuation(Int x, const Int& p) {
  if (x == 0) throw std::invalid_argument("valuation: zero input");
  long v = 0;
  x = abs(x);
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// v_p of a nonzero rational.
inline long valuation(const Rat& x, const Int& p) {
  if (x == 0) throw std::invalid_argument("valuation: zero input");
  long v = 0;
  Int num = x.get_num(), den = x.get_den();
  num = abs(num);
  while (num % p == 0) { num /= p; ++v; }
  while (den % p == 0) { den /= p; --v; }
  return v;
}

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Exact determinant by fraction-free-ish Gaussian elimination.
inline Rat rat_det(RatMat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("rat_det: not square");
  const Eigen::Index n = m.rows();
  Rat det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < n; ++r)
      if (m(r, c) != 0) { piv = r; break; }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      m.row(piv).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    Rat inv = Rat(1) / m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Rat f = m(r, c) * inv;
      for (Eigen::Index j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

inline Rat int_det(const IntMat& m) { return rat_det(to_rat(m)); }

/// Exact inverse via Gauss-Jordan; throws on singular input.
inline RatMat rat_inverse(const RatMat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("rat_inverse: not square");
  const Eigen::Index n = a.rows();
  RatMat m = a;
  RatMat inv = rat_identity(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < n; ++r)
      if (m(r, c) != 0) { piv = r; break; }
    if (piv < 0) throw std::invalid_argument("rat_inverse: singular matrix");
    if (piv != c) {
      m.row(piv).swap(m.row(c));
      inv.row(piv).swap(inv.row(c));
    }
    Rat d = Rat(1) / m(c, c);
    for (Eigen::Index j = 0; j < n; ++j) {
      m(c, j) *= d;
      inv(c, j) *= d;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rat f = m(r, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

inline std::string mat_key(const IntMat& m) {
  std::string k;
  k += std::to_string(m.rows());
  k += 'x';
  k += std::to_string(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      k += ',';
      k += m(i, j).get_str();
    }
  return k;
}

inline IntMat int_mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMat m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline RatMat rat_mat(std::initializer_list<std::initializer_list<long>> rows) {
  return to_rat(int_mat(rows));
}

} // namespace sunit
