#include "sunit/quaternion.hpp"

#include <algorithm>
#include <set>

namespace sunit {

std::string QuatElt::str() const {
  return c[0].get_str() + "," + c[1].get_str() + "," + c[2].get_str() + "," +
         c[3].get_str();
}

QuatElt quat_add(const QuatElt& x, const QuatElt& y) {
  QuatElt r;
  for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
  return r;
}

QuatElt quat_neg(const QuatElt& x) {
  QuatElt r;
  for (int i = 0; i < 4; ++i) r.c[i] = -x.c[i];
  return r;
}

QuatElt quat_mul(const QuatAlg& alg, const QuatElt& x, const QuatElt& y) {
  const Rat &a = alg.a, &b = alg.b;
  const Rat &x0 = x.c[0], &x1 = x.c[1], &x2 = x.c[2], &x3 = x.c[3];
  const Rat &y0 = y.c[0], &y1 = y.c[1], &y2 = y.c[2], &y3 = y.c[3];
  QuatElt r;
  // 1, i, j, k = ij with i^2 = a, j^2 = b, ji = -k, ik = aj, ki = -aj,
  // jk = -bi, kj = bi, k^2 = -ab.
  r.c[0] = x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3;
  r.c[1] = x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2;
  r.c[2] = x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1;
  r.c[3] = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
  return r;
}

QuatElt quat_conj(const QuatElt& x) {
  return QuatElt{{x.c[0], -x.c[1], -x.c[2], -x.c[3]}};
}

Rat quat_trd(const QuatElt& x) { return Rat(2) * x.c[0]; }

Rat quat_nrd(const QuatAlg& alg, const QuatElt& x) {
  return x.c[0] * x.c[0] - alg.a * x.c[1] * x.c[1] - alg.b * x.c[2] * x.c[2] +
         alg.a * alg.b * x.c[3] * x.c[3];
}

QuatElt quat_inv(const QuatAlg& alg, const QuatElt& x) {
  Rat n = quat_nrd(alg, x);
  if (n == 0) throw std::invalid_argument("quat_inv: zero divisor");
  QuatElt r = quat_conj(x);
  for (int i = 0; i < 4; ++i) r.c[i] /= n;
  return r;
}

// ---------------------------------------------------------------------
// Hilbert symbols.

namespace {

// Legendre symbol of a p-adic unit given as a rational, p odd.
int legendre_unit(const Rat& u, long p) {
  Int pz(p);
  Int num = u.get_num() % pz, den = u.get_den() % pz;
  std::int64_t n = ((num.get_si() % p) + p) % p;
  std::int64_t d = ((den.get_si() % p) + p) % p;
  std::int64_t v = (n * fp_inv(d, p)) % p;
  if (v == 0) throw std::logic_error("legendre_unit: not a unit");
  // Euler's criterion.
  std::int64_t r = 1, base = v, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = (r * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// u mod m for an odd rational unit at 2 (m = 4 or 8).
long odd_unit_mod(const Rat& u, long m) {
  Int num = u.get_num(), den = u.get_den();
  long n = mpz_fdiv_ui(num.get_mpz_t(), static_cast<unsigned long>(m));
  long d = mpz_fdiv_ui(den.get_mpz_t(), static_cast<unsigned long>(m));
  // d is odd; invert it mod m by brute force (m <= 8).
  for (long x = 1; x < m; ++x)
    if ((d * x) % m == 1) return (n * x) % m;
  throw std::logic_error("odd_unit_mod: denominator not invertible");
}

} // namespace

int hilbert_symbol(const Rat& a, const Rat& b, long p) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: p not prime");
  Int pz(p);
  long alpha = valuation(a, pz), beta = valuation(b, pz);
  Rat pa = Rat(int_pow(pz, static_cast<unsigned long>(std::abs(alpha))));
  Rat u = alpha >= 0 ? Rat(a / pa) : Rat(a * pa);
  Rat pb = Rat(int_pow(pz, static_cast<unsigned long>(std::abs(beta))));
  Rat v = beta >= 0 ? Rat(b / pb) : Rat(b * pb);
  if (p != 2) {
    int sign = 1;
    if ((alpha % 2) && (beta % 2) && ((p - 1) / 2) % 2 == 1) sign = -sign;
    if (beta % 2 && legendre_unit(u, p) == -1) sign = -sign;
    if (alpha % 2 && legendre_unit(v, p) == -1) sign = -sign;
    return sign;
  }
  // p = 2: (-1)^(eps(u) eps(v) + alpha omega(v) + beta omega(u)).
  auto eps = [](long m8) { return ((m8 - 1) / 2) % 2 != 0; }; // (u-1)/2 mod 2
  auto omega = [](long m8) { return (m8 * m8 - 1) / 8 % 2 != 0; };
  long u8 = odd_unit_mod(u, 8), v8 = odd_unit_mod(v, 8);
  bool exp = (eps(u8) && eps(v8));
  if (alpha % 2 && omega(v8)) exp = !exp;
  if (beta % 2 && omega(u8)) exp = !exp;
  return exp ? -1 : 1;
}

std::vector<long> ramified_primes(const QuatAlg& alg) {
  std::set<long> candidates{2};
  auto add_support = [&](const Rat& x) {
    for (Int v : {Int(abs(x.get_num())), Int(x.get_den())}) {
      for (long q = 2; q * q <= v; ++q)
        while (v % q == 0) {
          candidates.insert(q);
          v /= q;
        }
      if (v > 1) candidates.insert(v.get_si());
    }
  };
  add_support(alg.a);
  add_support(alg.b);
  std::vector<long> out;
  for (long q : candidates)
    if (hilbert_symbol(alg.a, alg.b, q) == -1) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------
// Orders.

QuatElt QuatOrder::element_from_order_coords(const RatMat& row) const {
  RatMat x = row * basis;
  return QuatElt{{x(0, 0), x(0, 1), x(0, 2), x(0, 3)}};
}

RatMat QuatOrder::order_coords(const QuatElt& x) const {
  RatMat row(1, 4);
  for (int i = 0; i < 4; ++i) row(0, i) = x.c[i];
  return row * basis_inv;
}

QuatOrder make_order(const QuatAlg& alg, const RatMat& basis) {
  if (basis.rows() != 4 || basis.cols() != 4)
    throw std::invalid_argument("make_order: basis must be 4x4");
  if (rat_det(basis) == 0) throw std::invalid_argument("make_order: basis is singular");
  QuatOrder o;
  o.alg = alg;
  o.basis = basis;
  o.basis_inv = rat_inverse(basis);

  // The first basis element must be 1 (the regular representation and
  // congruence probes read elements off the first row).
  QuatElt b0{{basis(0, 0), basis(0, 1), basis(0, 2), basis(0, 3)}};
  if (!(b0 == QuatElt::one()))
    throw std::invalid_argument("make_order: first basis element must be 1");

  // Closure under multiplication.
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      QuatElt br{{basis(r, 0), basis(r, 1), basis(r, 2), basis(r, 3)}};
      QuatElt bs{{basis(s, 0), basis(s, 1), basis(s, 2), basis(s, 3)}};
      RatMat coords = o.order_coords(quat_mul(alg, br, bs));
      if (!is_integral(coords))
        throw std::invalid_argument("make_order: basis is not closed under multiplication");
    }

  // Gram matrix of 2*Nrd on order coordinates.
  o.gram = RatMat::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      QuatElt br{{basis(r, 0), basis(r, 1), basis(r, 2), basis(r, 3)}};
      QuatElt bs{{basis(s, 0), basis(s, 1), basis(s, 2), basis(s, 3)}};
      o.gram(r, s) = quat_trd(quat_mul(alg, br, quat_conj(bs)));
    }
  return o;
}

QuatOrder hurwitz_order() {
  QuatAlg alg{Rat(-1), Rat(-1)};
  RatMat basis = rat_identity(4);
  for (int c = 0; c < 4; ++c) basis(3, c) = make_rat(1, 2);
  return make_order(alg, basis);
}

QuatOrder lipschitz_order() {
  return make_order(QuatAlg{Rat(-1), Rat(-1)}, rat_identity(4));
}

Int reduced_discriminant(const QuatOrder& o) {
  RatMat trd(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      QuatElt br{{o.basis(r, 0), o.basis(r, 1), o.basis(r, 2), o.basis(r, 3)}};
      QuatElt bs{{o.basis(s, 0), o.basis(s, 1), o.basis(s, 2), o.basis(s, 3)}};
      trd(r, s) = quat_trd(quat_mul(o.alg, br, bs));
    }
  Rat d = rat_det(trd);
  Int num = abs(d.get_num());
  if (d.get_den() != 1)
    throw std::logic_error("reduced_discriminant: non-integral trace form");
  Int root;
  mpz_sqrt(root.get_mpz_t(), num.get_mpz_t());
  if (root * root != num)
    throw std::logic_error("reduced_discriminant: determinant is not a square");
  return root;
}

bool is_maximal(const QuatOrder& o) {
  Int prod = 1;
  for (long q : ramified_primes(o.alg)) prod *= q;
  return reduced_discriminant(o) == prod;
}

RatMat right_rep(const QuatOrder& o, const QuatElt& x) {
  RatMat r(4, 4);
  for (int i = 0; i < 4; ++i) {
    QuatElt bi{{o.basis(i, 0), o.basis(i, 1), o.basis(i, 2), o.basis(i, 3)}};
    r.row(i) = o.order_coords(quat_mul(o.alg, bi, x)).row(0);
  }
  return r;
}

RatMat left_rep(const QuatOrder& o, const QuatElt& x) {
  RatMat r(4, 4);
  for (int i = 0; i < 4; ++i) {
    QuatElt bi{{o.basis(i, 0), o.basis(i, 1), o.basis(i, 2), o.basis(i, 3)}};
    r.row(i) = o.order_coords(quat_mul(o.alg, x, bi)).row(0);
  }
  return r;
}

QuatElt rep_to_element(const QuatOrder& o, const RatMat& r) {
  QuatElt x = o.element_from_order_coords(r.row(0));
  if (!mat_eq(right_rep(o, x), r))
    throw std::invalid_argument("rep_to_element: matrix is not a right representation");
  return x;
}

// ---------------------------------------------------------------------
// Short vectors (exact Fincke-Pohst on a positive-definite Gram matrix).

std::vector<IntMat> short_vectors(const RatMat& gram, const Rat& target) {
  const int n = static_cast<int>(gram.rows());
  if (target < 0) throw std::invalid_argument("short_vectors: negative target");

  // Quadratic completion: value = sum_i q(i,i) (y_i + sum_{j>i} q(i,j) y_j)^2.
  RatMat q = gram;
  for (int i = 0; i < n; ++i) {
    if (q(i, i) <= 0)
      throw std::invalid_argument("short_vectors: form is not positive definite");
    for (int j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j); // pre-division value, mirrored for the Schur pass
      q(i, j) = q(i, j) / q(i, i);
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }

  std::vector<IntMat> out;
  std::vector<Int> y(static_cast<std::size_t>(n), Int(0));

  // Depth-first from the last coordinate; exact bounds via integer sqrt.
  auto rec = [&](auto&& self, int i, const Rat& budget) -> void {
    if (i < 0) {
      if (budget == 0) {
        bool zero = true;
        for (const Int& v : y)
          if (v != 0) zero = false;
        if (!zero) {
          IntMat row(1, n);
          for (int t = 0; t < n; ++t) row(0, t) = y[static_cast<std::size_t>(t)];
          out.push_back(row);
        }
      }
      return;
    }
    Rat center(0);
    for (int j = i + 1; j < n; ++j) center += q(i, j) * Rat(y[static_cast<std::size_t>(j)]);
    // |y_i + center| <= sqrt(budget / q(i,i)).
    Rat bound2 = budget / q(i, i);
    Int ceil_b2;
    mpz_cdiv_q(ceil_b2.get_mpz_t(), bound2.get_num().get_mpz_t(),
               bound2.get_den().get_mpz_t());
    Int r;
    mpz_sqrt(r.get_mpz_t(), ceil_b2.get_mpz_t());
    r += 1; // conservative
    // Integer range around -center.
    Rat lo_r = -center - Rat(r), hi_r = -center + Rat(r);
    Int lo, hi;
    mpz_cdiv_q(lo.get_mpz_t(), lo_r.get_num().get_mpz_t(), lo_r.get_den().get_mpz_t());
    mpz_fdiv_q(hi.get_mpz_t(), hi_r.get_num().get_mpz_t(), hi_r.get_den().get_mpz_t());
    for (Int v = lo; v <= hi; v += 1) {
      Rat term = Rat(v) + center;
      Rat used = q(i, i) * term * term;
      if (used > budget) continue;
      y[static_cast<std::size_t>(i)] = v;
      self(self, i - 1, budget - used);
    }
    y[static_cast<std::size_t>(i)] = 0;
  };
  rec(rec, n - 1, target);

  std::sort(out.begin(), out.end(),
            [](const IntMat& a, const IntMat& b) { return mat_key(a) < mat_key(b); });
  return out;
}

// ---------------------------------------------------------------------
// Units, ideals, generators.

namespace {

std::string elt_key(const QuatElt& x) { return x.str(); }

} // namespace

std::vector<QuatElt> unit_group(const QuatOrder& o) {
  if (!o.alg.definite()) throw std::invalid_argument("unit_group: algebra is not definite");
  std::vector<QuatElt> units;
  for (const IntMat& y : short_vectors(o.gram, Rat(2))) {
    units.push_back(o.element_from_order_coords(to_rat(y)));
  }
  // Deterministic order and sanity: closed under product and inverse.
  std::sort(units.begin(), units.end(),
            [](const QuatElt& a, const QuatElt& b) { return elt_key(a) < elt_key(b); });
  std::set<std::string> keys;
  for (const QuatElt& u : units) keys.insert(elt_key(u));
  for (const QuatElt& u : units) {
    if (!keys.count(elt_key(quat_inv(o.alg, u))))
      throw std::logic_error("unit_group: not closed under inverses");
    for (const QuatElt& v : units)
      if (!keys.count(elt_key(quat_mul(o.alg, u, v))))
        throw std::logic_error("unit_group: not closed under products");
  }
  return units;
}

std::vector<IdealLattice> neighbor_ideals(const QuatOrder& o, long p) {
  if (!is_prime(p)) throw std::invalid_argument("neighbor_ideals: p not prime");
  if (hilbert_symbol(o.alg.a, o.alg.b, p) != 1)
    throw std::invalid_argument("neighbor_ideals: p ramifies; the local building is a point");

  // Left submodules of O/pO of F_p-dimension 2, via the integral
  // multiplication table.
  std::vector<FpMat> lmats;
  for (int r = 0; r < 4; ++r) {
    QuatElt br{{o.basis(r, 0), o.basis(r, 1), o.basis(r, 2), o.basis(r, 3)}};
    lmats.push_back(fp_image(left_rep(o, br), p));
  }

  std::vector<IdealLattice> out;
  for (const FpMat& w : enumerate_subspaces(4, 2, p)) {
    bool closed = true;
    for (const FpMat& lm : lmats) {
      // Row space of w must absorb left multiplication.
      FpMat moved = fp_mul(w, lm);
      FpMat stacked;
      stacked.p = p;
      stacked.m.resize(4, 4);
      stacked.m.topRows(2) = w.m;
      stacked.m.bottomRows(2) = moved.m;
      if (rref(stacked).rows() != 2) { closed = false; break; }
    }
    if (!closed) continue;
    IntMat stack(6, 4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 4; ++c) stack(r, c) = w.m(r, c);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) stack(2 + r, c) = (r == c) ? Int(p) : Int(0);
    IdealLattice j;
    j.basis = hnf(IntMat(row_lattice_basis(stack))).H;
    out.push_back(std::move(j));
  }
  if (static_cast<long>(out.size()) != p + 1)
    throw std::logic_error("neighbor_ideals: expected p+1 maximal left ideals, found " +
                           std::to_string(out.size()));
  std::sort(out.begin(), out.end(),
            [](const IdealLattice& a, const IdealLattice& b) { return a.key() < b.key(); });
  for (const IdealLattice& j : out)
    if (abs(int_det(j.basis).get_num()) != Int(p) * Int(p))
      throw std::logic_error("neighbor_ideals: wrong index");
  return out;
}

QuatElt principal_generator(const QuatOrder& o, const IdealLattice& j) {
  IntMat id = int_identity(4);
  if (mat_eq(j.basis, id)) return QuatElt::one();

  // Reduced norm of the ideal from the index: [O : J] = Nrd(J)^2.
  Int index = abs(int_det(j.basis).get_num());
  Int nrd;
  mpz_sqrt(nrd.get_mpz_t(), index.get_mpz_t());
  if (nrd * nrd != index)
    throw std::invalid_argument("principal_generator: index is not a square");
  // Homothety case c*O (handled by the caller in tree walks).
  if (j.basis(0, 0) != 0 && mat_eq(j.basis, IntMat(j.basis(0, 0) * id)))
    return QuatElt::scalar(Rat(j.basis(0, 0)));

  RatMat jb = to_rat(j.basis);
  RatMat gram_j = jb * o.gram * jb.transpose();
  for (const IntMat& y : short_vectors(gram_j, Rat(2) * Rat(nrd))) {
    QuatElt x = o.element_from_order_coords(to_rat(y) * jb);
    // O * x must equal J exactly.
    RatMat ox = right_rep(o, x);
    if (!is_integral(ox)) continue;
    IntMat lattice = hnf(to_int(ox)).H;
    if (mat_eq(lattice, j.basis)) return x;
  }
  throw std::runtime_error(
      "principal_generator: no generator found; the ideal class is nontrivial, "
      "contradicting the class-number-one assumption");
}

// ---------------------------------------------------------------------
// Levels.

namespace {

class QuatBaseRewriter : public LevelBase {
public:
  QuatBaseRewriter(QuatOrder o, std::map<std::string, Word> words)
      : order_(std::move(o)), words_(std::move(words)) {}

  Word rewrite(const RatMat& g) const override {
    QuatElt x = rep_to_element(order_, g);
    auto it = words_.find(x.str());
    if (it == words_.end())
      throw std::invalid_argument("quaternion base rewrite: element is not a unit");
    return it->second;
  }

private:
  QuatOrder order_;
  std::map<std::string, Word> words_; // element key -> word
};

std::string unit_name(std::size_t idx) { return "u" + std::to_string(idx); }

} // namespace

GroupLevel quat_base_level(const QuatOrder& o) {
  if (!o.alg.definite())
    throw std::invalid_argument("quat_base_level: algebra is not definite");
  std::vector<QuatElt> units = unit_group(o);

  // Name the non-identity units in canonical order.
  std::vector<QuatElt> gens;
  for (const QuatElt& u : units)
    if (!(u == QuatElt::one())) gens.push_back(u);

  GroupLevel level;
  level.kind = GroupLevel::Kind::quaternion;
  level.n = 4;

  std::map<std::string, Word> words; // element -> word
  words[QuatElt::one().str()] = Word();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string name = unit_name(i);
    level.pres.generators.push_back(name);
    level.pres.images[name] = right_rep(o, gens[i]);
    words[gens[i].str()] = Word::letter(name);
    if (gens[i] == quat_neg(QuatElt::one())) level.center_words.push_back(name);
  }

  // Full multiplication table.
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      QuatElt prod = quat_mul(o.alg, gens[r], gens[s]);
      auto it = words.find(prod.str());
      if (it == words.end())
        throw std::logic_error("quat_base_level: unit table is not closed");
      Word rel = Word::letter(unit_name(r)) * Word::letter(unit_name(s)) *
                 it->second.inverse();
      level.pres.relators.push_back(rel);
      level.provenance.push_back(ProvenanceEntry{"unit-table"});
    }

  level.pres.validate();
  detail::verify_new_relators(level.pres, level.provenance, 0);
  level.base = std::make_shared<QuatBaseRewriter>(o, std::move(words));
  return level;
}

namespace {

GroupLevel quat_extend(const GroupLevel& level, long p, const QuatOrder& o,
                       int rep_rotation) {
  for (long q : level.primes)
    if (q == p) throw std::invalid_argument("quat_s_presentation: repeated prime");
  if (!is_prime(p)) throw std::invalid_argument("quat_s_presentation: p not prime");

  const bool ramified = hilbert_symbol(o.alg.a, o.alg.b, p) == -1;

  GroupLevel out;
  out.kind = GroupLevel::Kind::quaternion;
  out.n = 4;
  out.primes = level.primes;
  out.primes.push_back(p);
  out.prev = std::make_shared<GroupLevel>(level);
  out.center_words = level.center_words;
  out.pres = level.pres;
  out.provenance = level.provenance;

  auto ext = std::make_shared<QuatExtension>();
  ext->p = p;
  ext->ramified = ramified;

  if (ramified) {
    // Degenerate building: a single vertex; the level is generated by
    // the previous level and any normalizing element of norm p.
    std::vector<IntMat> cand = short_vectors(o.gram, Rat(2) * Rat(p));
    QuatElt lambda;
    bool found = false;
    for (const IntMat& y : cand) {
      QuatElt x = o.element_from_order_coords(to_rat(y));
      RatMat right = right_rep(o, x);  // O * x
      RatMat left = left_rep(o, x);    // x * O
      if (!is_integral(right) || !is_integral(left)) continue;
      if (mat_eq(hnf(to_int(right)).H, hnf(to_int(left)).H)) {
        lambda = x;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("quat_s_presentation: no two-sided element of norm p at a "
                               "ramified prime");

    QuatEdgeData e;
    e.minus = false;
    e.w_name = "l" + std::to_string(p);
    e.w_image = right_rep(o, lambda);
    out.pres.generators.push_back(e.w_name);
    out.pres.images[e.w_name] = e.w_image;

    const std::size_t first_new = out.pres.relators.size();
    Word lw = Word::letter(e.w_name);
    RatMat lam_inv = rat_inverse(e.w_image);
    for (const std::string& g : level.pres.generators) {
      RatMat conj = e.w_image * level.pres.images.at(g) * lam_inv;
      Word rw = rewrite(level, conj);
      out.pres.relators.push_back(lw * Word::letter(g) * lw.inverse() * rw.inverse());
      ProvenanceEntry pe{"ramified-conj"};
      pe.prime = p;
      out.provenance.push_back(pe);
    }
    ext->edges.push_back(std::move(e));
    out.pres.validate();
    detail::verify_new_relators(out.pres, out.provenance, first_new);
    out.qext = ext;
    // The central scalar p is lambda^2 up to a unit; record its word.
    RatMat p_scalar = detail::rat_scale(rat_identity(4), Rat(p));
    out.center_words.push_back(rewrite(out, p_scalar).str());
    return out;
  }

  // Split prime: tree extension.  Stabilizer of the base vertex is
  // <previous level, z_p> with z_p = p (central).
  ext->z_name = "z" + std::to_string(p);
  out.center_words.push_back(ext->z_name);
  RatMat z_img = detail::rat_scale(rat_identity(4), Rat(p));
  out.pres.generators.push_back(ext->z_name);
  out.pres.images[ext->z_name] = z_img;
  Word z = Word::letter(ext->z_name);
  for (const std::string& g : level.pres.generators) {
    Word gg = Word::letter(g);
    out.pres.relators.push_back(z * gg * z.inverse() * gg.inverse());
    ProvenanceEntry pe{"center-commutator"};
    pe.prime = p;
    out.provenance.push_back(pe);
  }

  // All p+1 neighbors, their principal generators (class number one is
  // asserted here), and the orbit decomposition under the previous level.
  std::vector<IdealLattice> ideals = neighbor_ideals(o, p);
  std::map<std::string, IdealLattice> ideal_by_key;
  std::map<std::string, QuatElt> generator_by_key;
  std::vector<std::string> neighbor_keys;
  for (const IdealLattice& j : ideals) {
    Vertex v = canonical_vertex(j.basis, p);
    if (!mat_eq(v.H, j.basis))
      throw std::logic_error("quat_s_presentation: neighbor is not canonical");
    neighbor_keys.push_back(v.key());
    ideal_by_key[v.key()] = j;
    generator_by_key[v.key()] = principal_generator(o, j);
  }

  std::vector<std::pair<std::string, RatMat>> gens;
  for (const std::string& g : level.pres.generators)
    gens.emplace_back(g, level.pres.images.at(g));

  // Rotating the scan order varies which neighbor becomes the orbit
  // representative; the resulting presentations are all equivalent.
  std::vector<std::string> scan_order = neighbor_keys;
  std::rotate(scan_order.begin(),
              scan_order.begin() + (rep_rotation % static_cast<int>(scan_order.size())),
              scan_order.end());

  std::set<std::string> unseen(neighbor_keys.begin(), neighbor_keys.end());
  struct OrbitData {
    std::string rep_key;
    std::vector<std::string> keys;
    std::vector<Word> schreier;
  };
  std::vector<OrbitData> orbits;
  while (!unseen.empty()) {
    std::string root;
    for (const std::string& k : scan_order)
      if (unseen.count(k)) { root = k; break; }
    OrbitData orbit;
    orbit.rep_key = root;
    ext->neighbor_transporter[root] = Word();
    orbit.keys.push_back(root);
    unseen.erase(root);
    std::set<std::string> schreier_seen;
    std::map<std::string, Vertex> vert_by_key;
    vert_by_key[root] = canonical_vertex(ideal_by_key.at(root).basis, p);
    for (std::size_t qi = 0; qi < orbit.keys.size(); ++qi) {
      Vertex v = vert_by_key.at(orbit.keys[qi]);
      Word tv = ext->neighbor_transporter.at(orbit.keys[qi]);
      for (const auto& [name, img] : gens) {
        for (int dir : {1, -1}) {
          Vertex moved = act(v, dir == 1 ? img : rat_inverse(img));
          std::string mk = moved.key();
          if (!ideal_by_key.count(mk))
            throw std::logic_error("quat_s_presentation: stabilizer action left the link");
          Word step = tv * Word::letter(name, dir);
          auto it = ext->neighbor_transporter.find(mk);
          if (it == ext->neighbor_transporter.end()) {
            ext->neighbor_transporter[mk] = step;
            orbit.keys.push_back(mk);
            vert_by_key[mk] = moved;
            unseen.erase(mk);
          } else if (std::find(orbit.keys.begin(), orbit.keys.end(), mk) !=
                     orbit.keys.end()) {
            Word schreier = step * it->second.inverse();
            if (!schreier.empty() && schreier_seen.insert(schreier.str()).second)
              orbit.schreier.push_back(schreier);
          }
        }
      }
    }
    orbits.push_back(std::move(orbit));
  }

  // After the first prime the previous level is infinite and strong
  // approximation forces transitivity.
  if (!level.primes.empty() && orbits.size() != 1)
    throw std::logic_error("quat_s_presentation: stabilizer action on neighbors is not "
                           "transitive above the base level");

  const std::size_t first_new = out.pres.relators.size();

  int edge_id = 0;
  for (const OrbitData& orbit : orbits) {
    ext->orbit_sizes.push_back(static_cast<int>(orbit.keys.size()));
    const QuatElt lambda = generator_by_key.at(orbit.rep_key);
    const RatMat lambda_rep = right_rep(o, lambda);

    // Reversal test: [O * conj(lambda)] in the same stabilizer orbit as
    // the representative neighbor itself.
    QuatElt conj_l = quat_conj(lambda);
    Vertex vbar = canonical_vertex(RatMat(right_rep(o, conj_l)), p);
    bool minus = std::find(orbit.keys.begin(), orbit.keys.end(), vbar.key()) !=
                 orbit.keys.end();

    QuatEdgeData e;
    e.minus = minus;
    e.rep_key = orbit.rep_key;
    e.w_name = orbits.size() == 1 ? "l" + std::to_string(p)
                                  : "l" + std::to_string(p) + "_" +
                                       std::to_string(edge_id + 1);

    if (minus) {
      // Witness: conj(lambda) * s with s carrying [O conj(lambda)] back
      // to the representative; it swaps the edge ends and has norm
      // p * (S-unit).
      Word s = ext->neighbor_transporter.at(vbar.key()).inverse();
      RatMat s_img = evaluate(s, level.pres.images, 4);
      e.w_image = right_rep(o, conj_l) * s_img;
    } else {
      e.w_image = lambda_rep;
    }
    out.pres.generators.push_back(e.w_name);
    out.pres.images[e.w_name] = e.w_image;
    Word w = Word::letter(e.w_name);

    if (!minus) {
      out.pres.relators.push_back(w * z * w.inverse() * z.inverse());
      ProvenanceEntry pe{"edge-plus"};
      pe.prime = p;
      pe.edge = edge_id + 1;
      out.provenance.push_back(pe);
      int k = 0;
      for (const Word& h : orbit.schreier) {
        RatMat conj = e.w_image * evaluate(h, level.pres.images, 4) * rat_inverse(e.w_image);
        Word rw = stabilizer_rewrite(level, p, ext->z_name, conj);
        out.pres.relators.push_back(w * h * w.inverse() * rw.inverse());
        ProvenanceEntry pk{"edge-plus"};
        pk.prime = p;
        pk.edge = edge_id + 1;
        pk.schreier = k++;
        out.provenance.push_back(pk);
      }
    } else {
      // z conjugation and the square land in the vertex stabilizer.
      {
        RatMat mid = e.w_image * z_img * e.w_image;
        Word rw = stabilizer_rewrite(level, p, ext->z_name, mid);
        out.pres.relators.push_back(w * z * w * rw.inverse());
        ProvenanceEntry pe{"edge-minus"};
        pe.prime = p;
        pe.edge = edge_id + 1;
        out.provenance.push_back(pe);
      }
      {
        RatMat sq = e.w_image * e.w_image;
        Word rw = stabilizer_rewrite(level, p, ext->z_name, sq);
        out.pres.relators.push_back(w * w * rw.inverse());
        ProvenanceEntry ps{"minus-square"};
        ps.prime = p;
        ps.edge = edge_id + 1;
        out.provenance.push_back(ps);
      }
      int k = 0;
      for (const Word& h : orbit.schreier) {
        RatMat mid = e.w_image * evaluate(h, level.pres.images, 4) * e.w_image;
        Word rw = stabilizer_rewrite(level, p, ext->z_name, mid);
        out.pres.relators.push_back(w * h * w * rw.inverse());
        ProvenanceEntry pk{"edge-minus"};
        pk.prime = p;
        pk.edge = edge_id + 1;
        pk.schreier = k++;
        out.provenance.push_back(pk);
      }
    }

    for (const std::string& k : orbit.keys) ext->neighbor_edge[k] = edge_id;
    ext->edges.push_back(std::move(e));
    ++edge_id;
  }

  out.pres.validate();
  detail::verify_new_relators(out.pres, out.provenance, first_new);
  out.qext = ext;
  return out;
}

} // namespace

GroupLevel quat_s_presentation(const QuatOrder& o, const std::vector<long>& primes,
                               int rep_rotation) {
  if (!o.alg.definite())
    throw std::invalid_argument("quat_s_presentation: algebra is not definite");
  if (!is_maximal(o))
    throw std::invalid_argument("quat_s_presentation: order is not maximal");
  if (rep_rotation < 0)
    throw std::invalid_argument("quat_s_presentation: rep_rotation must be nonnegative");
  GroupLevel level = quat_base_level(o);
  for (long p : primes) level = quat_extend(level, p, o, rep_rotation);
  return level;
}

} // namespace sunit
