#pragma once

#include "sunit/numeric.hpp"

#include <cstdint>

namespace sunit {

using FpEntryMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense matrix over F_p, entries reduced into [0, p).
struct FpMat {
  std::int64_t p = 0;
  FpEntryMat m;

  Eigen::Index rows() const { return m.rows(); }
  Eigen::Index cols() const { return m.cols(); }
  std::string key() const;
  bool operator==(const FpMat& o) const { return p == o.p && m == o.m; }
};

FpMat fp_mat(std::int64_t p, std::initializer_list<std::initializer_list<long>> rows);
FpMat fp_identity(std::int64_t p, Eigen::Index n);
FpMat fp_mul(const FpMat& a, const FpMat& b);

/// Modular inverse; throws if gcd(a, p) != 1.
std::int64_t fp_inv(std::int64_t a, std::int64_t p);

/// Entry-wise reduction of an exact rational matrix; denominators are
/// inverted mod p and must be units.
FpMat fp_image(const RatMat& m, std::int64_t p);
FpMat fp_image(const IntMat& m, std::int64_t p);

/// Reduced row echelon form; zero rows dropped.
FpMat rref(const FpMat& m);

/// Inverse of a square matrix over F_p; throws if singular.
FpMat fp_inverse(const FpMat& m);

bool is_prime(std::int64_t n);

/// Gaussian binomial coefficient (n choose k)_q, exact.
Int gaussian_binomial(int n, int k, const Int& q);

/// All k-dimensional subspaces of F_p^n, each as its unique reduced
/// row-echelon basis matrix; deterministic order.
std::vector<FpMat> enumerate_subspaces(int n, int k, std::int64_t p);

} // namespace sunit
