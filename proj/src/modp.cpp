#include "sunit/modp.hpp"

#include <algorithm>

namespace sunit {

std::string FpMat::key() const {
  std::string k = std::to_string(p) + "|" + std::to_string(rows()) + "x" +
                  std::to_string(cols());
  for (Eigen::Index i = 0; i < rows(); ++i)
    for (Eigen::Index j = 0; j < cols(); ++j) {
      k += ',';
      k += std::to_string(m(i, j));
    }
  return k;
}

FpMat fp_mat(std::int64_t p, std::initializer_list<std::initializer_list<long>> rows) {
  FpMat f;
  f.p = p;
  f.m.resize(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (long v : row) f.m(i, j++) = ((v % p) + p) % p;
    ++i;
  }
  return f;
}

FpMat fp_identity(std::int64_t p, Eigen::Index n) {
  FpMat f;
  f.p = p;
  f.m = FpEntryMat::Identity(n, n);
  return f;
}

FpMat fp_mul(const FpMat& a, const FpMat& b) {
  if (a.p != b.p || a.cols() != b.rows())
    throw std::invalid_argument("fp_mul: shape or modulus mismatch");
  FpMat c;
  c.p = a.p;
  c.m = FpEntryMat::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (a.m(i, k) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        c.m(i, j) = (c.m(i, j) + a.m(i, k) * b.m(k, j)) % a.p;
    }
  return c;
}

std::int64_t fp_inv(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = ((a % p) + p) % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::swap(t -= q * new_t, new_t);
    std::swap(r -= q * new_r, new_r);
  }
  if (r != 1) throw std::invalid_argument("fp_inv: not invertible mod p");
  return ((t % p) + p) % p;
}

FpMat fp_image(const RatMat& m, std::int64_t p) {
  FpMat f;
  f.p = p;
  f.m.resize(m.rows(), m.cols());
  Int pz(static_cast<long>(p));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Int num = m(i, j).get_num() % pz;
      Int den = m(i, j).get_den() % pz;
      std::int64_t n64 = ((num.get_si() % p) + p) % p;
      std::int64_t d64 = ((den.get_si() % p) + p) % p;
      f.m(i, j) = (n64 * fp_inv(d64, p)) % p;
    }
  return f;
}

FpMat fp_image(const IntMat& m, std::int64_t p) { return fp_image(to_rat(m), p); }

FpMat rref(const FpMat& in) {
  FpMat f = in;
  const std::int64_t p = f.p;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < f.cols() && row < f.rows(); ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = row; r < f.rows(); ++r)
      if (f.m(r, col) != 0) { piv = r; break; }
    if (piv < 0) continue;
    if (piv != row) f.m.row(piv).swap(f.m.row(row));
    std::int64_t inv = fp_inv(f.m(row, col), p);
    for (Eigen::Index j = 0; j < f.cols(); ++j)
      f.m(row, j) = (f.m(row, j) * inv) % p;
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
      if (r == row || f.m(r, col) == 0) continue;
      std::int64_t c = f.m(r, col);
      for (Eigen::Index j = 0; j < f.cols(); ++j)
        f.m(r, j) = ((f.m(r, j) - c * f.m(row, j)) % p + p) % p;
    }
    ++row;
  }
  FpMat out;
  out.p = p;
  out.m = f.m.topRows(row);
  return out;
}

FpMat fp_inverse(const FpMat& in) {
  if (in.rows() != in.cols()) throw std::invalid_argument("fp_inverse: not square");
  const std::int64_t p = in.p;
  const Eigen::Index n = in.rows();
  FpEntryMat a = in.m;
  FpEntryMat inv = FpEntryMat::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < n; ++r)
      if (a(r, c) != 0) { piv = r; break; }
    if (piv < 0) throw std::invalid_argument("fp_inverse: singular matrix");
    if (piv != c) {
      a.row(piv).swap(a.row(c));
      inv.row(piv).swap(inv.row(c));
    }
    std::int64_t d = fp_inv(a(c, c), p);
    for (Eigen::Index j = 0; j < n; ++j) {
      a(c, j) = (a(c, j) * d) % p;
      inv(c, j) = (inv(c, j) * d) % p;
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      std::int64_t f = a(r, c);
      for (Eigen::Index j = 0; j < n; ++j) {
        a(r, j) = ((a(r, j) - f * a(c, j)) % p + p) % p;
        inv(r, j) = ((inv(r, j) - f * inv(c, j)) % p + p) % p;
      }
    }
  }
  FpMat out;
  out.p = p;
  out.m = inv;
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Int gaussian_binomial(int n, int k, const Int& q) {
  if (k < 0 || k > n) throw std::invalid_argument("gaussian_binomial: k out of range");
  if (q < 2) throw std::invalid_argument("gaussian_binomial: q < 2");
  Int num = 1, den = 1;
  for (int i = 1; i <= k; ++i) {
    num *= int_pow(q, static_cast<unsigned long>(n - k + i)) - 1;
    den *= int_pow(q, static_cast<unsigned long>(i)) - 1;
  }
  Int r, rem;
  mpz_tdiv_qr(r.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem != 0) throw std::logic_error("gaussian_binomial: inexact division");
  return r;
}

std::vector<FpMat> enumerate_subspaces(int n, int k, std::int64_t p) {
  if (k <= 0 || k >= n)
    throw std::invalid_argument("enumerate_subspaces: need 0 < k < n");
  if (!is_prime(p)) throw std::invalid_argument("enumerate_subspaces: p not prime");

  std::vector<FpMat> out;
  // Pivot column combinations in lexicographic order.
  std::vector<int> piv(k);
  for (int i = 0; i < k; ++i) piv[i] = i;
  auto next_comb = [&]() {
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) return false;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    return true;
  };

  do {
    // Free positions: (row i, col j) with j > piv[i] and j not a pivot column.
    std::vector<std::pair<int, int>> free_pos;
    std::vector<bool> is_piv(n, false);
    for (int i = 0; i < k; ++i) is_piv[piv[i]] = true;
    for (int i = 0; i < k; ++i)
      for (int j = piv[i] + 1; j < n; ++j)
        if (!is_piv[j]) free_pos.emplace_back(i, j);

    const std::size_t nfree = free_pos.size();
    std::vector<std::int64_t> vals(nfree, 0);
    for (;;) {
      FpMat f;
      f.p = p;
      f.m = FpEntryMat::Zero(k, n);
      for (int i = 0; i < k; ++i) f.m(i, piv[i]) = 1;
      for (std::size_t t = 0; t < nfree; ++t)
        f.m(free_pos[t].first, free_pos[t].second) = vals[t];
      out.push_back(std::move(f));
      // Increment the base-p counter.
      std::size_t t = 0;
      while (t < nfree && ++vals[t] == p) vals[t++] = 0;
      if (t == nfree) break;
    }
  } while (next_comb());
  return out;
}

} // namespace sunit
