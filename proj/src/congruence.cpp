#include "sunit/congruence.hpp"

#include <cstdlib>
#include <map>
#include <set>
#include <unordered_map>

#include "sunit/fpgroup.hpp"

namespace sunit {

long closure_cap_default() {
  if (const char* env = std::getenv("SUNIT_CLOSURE_CAP")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 5'000'000L;
}

namespace {

FpMat word_image(const Word& w, const std::map<std::string, FpMat>& images,
                 const std::map<std::string, FpMat>& inverses, long q, int n) {
  FpMat acc = fp_identity(q, n);
  for (const Letter& l : w.letters())
    acc = fp_mul(acc, l.exp == 1 ? images.at(l.gen) : inverses.at(l.gen));
  return acc;
}

// Reduced norm of a quaternion regular-representation matrix mod q
// (odd q): from M^2 - Trd*M + Nrd = 0 with Trd = tr(M)/2.
std::int64_t quat_nrd_mod(const FpMat& m, long q) {
  std::int64_t tr = 0;
  for (Eigen::Index i = 0; i < 4; ++i) tr = (tr + m.m(i, i)) % q;
  std::int64_t trd = (tr * fp_inv(2, q)) % q;
  FpMat sq = fp_mul(m, m);
  std::int64_t nrd = (((trd * m.m(0, 0) - sq.m(0, 0)) % q) + q) % q;
  return nrd;
}

std::int64_t fp_det(const FpMat& in) {
  FpMat f = in;
  const long q = f.p;
  std::int64_t det = 1;
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < f.rows(); ++r)
      if (f.m(r, c) != 0) { piv = r; break; }
    if (piv < 0) return 0;
    if (piv != c) {
      f.m.row(piv).swap(f.m.row(c));
      det = (q - det) % q;
    }
    det = (det * f.m(c, c)) % q;
    std::int64_t inv = fp_inv(f.m(c, c), q);
    for (Eigen::Index r = c + 1; r < f.rows(); ++r) {
      if (f.m(r, c) == 0) continue;
      std::int64_t fac = (f.m(r, c) * inv) % q;
      for (Eigen::Index j = c; j < f.cols(); ++j)
        f.m(r, j) = ((f.m(r, j) - fac * f.m(c, j)) % q + q) % q;
    }
  }
  return det;
}

struct Closure {
  long order = 0;
  long special = 0;
};

Closure closure_with_special(const FiniteImage& img, long cap) {
  const long q = img.q;
  const int n = img.n;
  auto is_special = [&](const FpMat& m) {
    if (img.kind == GroupLevel::Kind::matrix) return fp_det(m) == 1;
    return quat_nrd_mod(m, q) == 1;
  };

  std::unordered_map<std::string, long> seen;
  std::vector<FpMat> frontier{fp_identity(q, n)};
  seen[frontier[0].key()] = 0;
  Closure out;
  out.order = 1;
  out.special = 1;
  std::size_t qi = 0;
  std::vector<FpMat> elems = frontier;
  while (qi < elems.size()) {
    FpMat cur = elems[qi++];
    for (const auto& [name, g] : img.gens) {
      FpMat next = fp_mul(cur, g);
      auto [it, fresh] = seen.emplace(next.key(), out.order);
      if (!fresh) continue;
      ++out.order;
      if (out.order > cap)
        throw std::runtime_error("finite_group_order: closure cap of " +
                                 std::to_string(cap) + " exceeded");
      if (is_special(next)) ++out.special;
      elems.push_back(std::move(next));
    }
  }
  return out;
}

} // namespace

FiniteImage reduce_mod_q(const GroupLevel& level, long q) {
  if (!is_prime(q)) throw std::invalid_argument("reduce_mod_q: q not prime");
  for (long p : level.primes)
    if (p == q)
      throw std::invalid_argument("reduce_mod_q: q lies in S; denominators are not "
                                  "invertible");
  FiniteImage img;
  img.q = q;
  img.kind = level.kind;
  img.n = level.n;
  std::map<std::string, FpMat> images, inverses;
  for (const std::string& g : level.pres.generators) {
    FpMat f = fp_image(level.pres.images.at(g), q);
    images[g] = f;
    inverses[g] = fp_inverse(f);
    img.gens.emplace_back(g, f);
  }
  for (const Word& r : level.pres.relators)
    if (!(word_image(r, images, inverses, q, img.n) == fp_identity(q, img.n)))
      throw std::logic_error("reduce_mod_q: relator fails in the quotient: " + r.str());
  return img;
}

long finite_group_order(const FiniteImage& img, long cap) {
  return closure_with_special(img, cap).order;
}

Int gl_order(int n, long q) {
  Int out = 1;
  Int qn = int_pow(Int(q), static_cast<unsigned long>(n));
  for (int k = 0; k < n; ++k) out *= qn - int_pow(Int(q), static_cast<unsigned long>(k));
  return out;
}

Int sl_order(int n, long q) {
  Int r, rem;
  Int g = gl_order(n, q);
  Int d = Int(q) - 1;
  mpz_tdiv_qr(r.get_mpz_t(), rem.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
  if (rem != 0) throw std::logic_error("sl_order: inexact division");
  return r;
}

CongruenceProbe congruence_probe(const GroupLevel& level, long q, long cap) {
  CongruenceProbe probe;
  probe.q = q;
  FiniteImage img = reduce_mod_q(level, q); // throws on relator failure
  probe.relators_hold = true;
  Closure c = closure_with_special(img, cap);
  probe.image_order = c.order;
  probe.special_order = c.special;
  probe.expected_special =
      level.kind == GroupLevel::Kind::matrix ? sl_order(level.n, q) : sl_order(2, q);
  probe.strong_approximation = Int(probe.special_order) == probe.expected_special;
  return probe;
}

namespace {

std::vector<long> prime_factors(long m) {
  std::vector<long> out;
  for (long d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      out.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) out.push_back(m);
  return out;
}

// Does the coset action factor through reduction mod m?  Tested by the
// pair closure <(image mod m, coset permutation)>: the action factors
// exactly when the pairs form the graph of a function.
bool factors_through_mod(const GroupLevel& level, const CosetTable& table, long m,
                         long cap) {
  const int n = level.n;
  const long k = table.num_cosets;
  std::vector<std::pair<FpMat, std::vector<long>>> gens;
  for (std::size_t i = 0; i < table.generators.size(); ++i) {
    const std::string& name = table.generators[i];
    FpMat f = fp_image(level.pres.images.at(name), m);
    std::vector<long> perm(static_cast<std::size_t>(k));
    for (long c = 0; c < k; ++c)
      perm[static_cast<std::size_t>(c)] =
          table.tab[static_cast<std::size_t>(c)][2 * i];
    gens.emplace_back(std::move(f), std::move(perm));
  }

  auto perm_key = [](const std::vector<long>& v) {
    std::string s;
    for (long x : v) {
      s += std::to_string(x);
      s += ',';
    }
    return s;
  };

  long matrix_count = 0, pair_count = 0;
  {
    std::set<std::string> seen{fp_identity(m, n).key()};
    std::vector<FpMat> elems{fp_identity(m, n)};
    matrix_count = 1;
    for (std::size_t qi = 0; qi < elems.size(); ++qi)
      for (const auto& [g, perm] : gens) {
        FpMat next = fp_mul(elems[qi], g);
        if (seen.insert(next.key()).second) {
          ++matrix_count;
          if (matrix_count > cap)
            throw std::runtime_error("normal_scan: closure cap exceeded");
          elems.push_back(std::move(next));
        }
      }
  }
  {
    std::vector<long> idp(static_cast<std::size_t>(k));
    for (long c = 0; c < k; ++c) idp[static_cast<std::size_t>(c)] = c;
    std::set<std::string> seen{fp_identity(m, n).key() + "|" + perm_key(idp)};
    std::vector<std::pair<FpMat, std::vector<long>>> elems{{fp_identity(m, n), idp}};
    pair_count = 1;
    for (std::size_t qi = 0; qi < elems.size(); ++qi)
      for (const auto& [g, perm] : gens) {
        FpMat next = fp_mul(elems[qi].first, g);
        std::vector<long> nperm(static_cast<std::size_t>(k));
        for (long c = 0; c < k; ++c)
          nperm[static_cast<std::size_t>(c)] =
              perm[static_cast<std::size_t>(elems[qi].second[static_cast<std::size_t>(c)])];
        std::string key = next.key() + "|" + perm_key(nperm);
        if (seen.insert(key).second) {
          ++pair_count;
          if (pair_count > cap)
            throw std::runtime_error("normal_scan: closure cap exceeded");
          elems.emplace_back(std::move(next), std::move(nperm));
        }
      }
  }
  return pair_count == matrix_count;
}

} // namespace

NormalScanReport normal_scan(const GroupLevel& level, int max_index,
                             const std::vector<long>& predicted_primes, long cap) {
  if (max_index > 15)
    throw std::invalid_argument("normal_scan: max_index capped at 15 (desk scale)");

  NormalScanReport report;
  report.max_index = max_index;
  report.predicted_primes = predicted_primes;

  // Projectivize: kill the central scalars, then shrink conservatively.
  // The projective relators do not hold in the matrix images, so the
  // scan works on the bare presentation.
  Presentation proj = level.pres;
  proj.images.clear();
  for (const std::string& w : level.center_words) proj.relators.push_back(Word::parse(w));
  proj = simplify(proj);

  auto entries = low_index_subgroups(proj, max_index);
  for (const auto& e : entries) {
    if (!e.is_normal) continue;
    NormalScanEntry out;
    out.index = e.table.num_cosets;
    out.quotient_order = e.quotient_order;
    out.quotient_invariants = e.quotient_invariants;
    out.order_primes = prime_factors(e.quotient_order);
    for (long p : out.order_primes) {
      bool predicted = false;
      for (long pp : predicted_primes)
        if (pp == p) predicted = true;
      if (!predicted) out.flagged = true;
    }

    if (out.index > 1) {
      // Candidate congruence moduli: prime powers of the predicted set,
      // coprime to S.
      for (long q : predicted_primes) {
        bool in_s = false;
        for (long p : level.primes)
          if (p == q) in_s = true;
        if (in_s) continue;
        for (long m = q; m <= 16; m *= q) {
          if (factors_through_mod(level, e.table, m, cap)) {
            out.congruence_modulus = m;
            break;
          }
        }
        if (out.congruence_modulus) break;
      }
    }

    if (out.flagged) report.any_flagged = true;
    report.entries.push_back(std::move(out));
  }
  return report;
}

} // namespace sunit
