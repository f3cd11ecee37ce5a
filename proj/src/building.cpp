#include "sunit/building.hpp"

#include <set>

namespace sunit {

Vertex standard_vertex(int n, long p) {
  if (n < 2 || !is_prime(p))
    throw std::invalid_argument("standard_vertex: need n >= 2 and p prime");
  return Vertex{p, int_identity(n)};
}

Vertex canonical_vertex(const IntMat& b, long p) {
  if (b.rows() != b.cols())
    throw std::invalid_argument("canonical_vertex: matrix not square");
  SnfResult s = snf(b);
  const Eigen::Index n = b.rows();
  const Int pz(p);
  std::vector<long> exps(static_cast<std::size_t>(n));
  long emin = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (s.D(i, i) == 0)
      throw std::invalid_argument("canonical_vertex: singular matrix");
    exps[static_cast<std::size_t>(i)] = valuation(s.D(i, i), pz);
    emin = i == 0 ? exps[0] : std::min(emin, exps[static_cast<std::size_t>(i)]);
  }
  // Row lattice of b equals the row lattice of D * V^{-1}; locally at p
  // only the p-part of each elementary divisor matters.
  IntMat w = unimodular_inverse(s.V);
  IntMat rebuilt(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Int f = int_pow(pz, static_cast<unsigned long>(exps[static_cast<std::size_t>(i)] - emin));
    rebuilt.row(i) = f * w.row(i);
  }
  return Vertex{p, hnf(rebuilt).H};
}

Vertex canonical_vertex(const RatMat& b, long p) {
  Int d = denominator_lcm(b);
  RatMat scaled = b;
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) scaled(i, j) *= Rat(d);
  return canonical_vertex(to_int(scaled), p);
}

Vertex act(const Vertex& v, const RatMat& g) {
  return canonical_vertex(RatMat(to_rat(v.H) * g), v.p);
}

std::vector<Vertex> neighbors(const Vertex& v) {
  const int n = static_cast<int>(v.n());
  const long p = v.p;
  std::vector<Vertex> out;
  std::set<std::string> seen;
  for (int k = 1; k < n; ++k) {
    for (const FpMat& w : enumerate_subspaces(n, k, p)) {
      // Preimage of the subspace: lifted rows times H, plus p*H.
      IntMat stack(n + k, n);
      for (int r = 0; r < k; ++r) {
        IntMat lift(1, n);
        for (int c = 0; c < n; ++c) lift(0, c) = w.m(r, c);
        stack.row(r) = (lift * v.H).row(0);
      }
      for (int r = 0; r < n; ++r) stack.row(k + r) = Int(p) * v.H.row(r);
      Vertex u = canonical_vertex(IntMat(row_lattice_basis(stack)), p);
      if (!seen.insert(u.key()).second)
        throw std::logic_error("neighbors: duplicate neighbor");
      out.push_back(std::move(u));
    }
  }
  return out;
}

namespace {

void check_compatible(const Vertex& v, const Vertex& w, const char* who) {
  if (v.p != w.p || v.n() != w.n())
    throw std::invalid_argument(std::string(who) + ": mismatched p or n");
}

// p-adic valuations of the relative elementary divisors of w against v.
std::vector<long> relative_exponents(const Vertex& v, const Vertex& w) {
  RatMat a = to_rat(w.H) * rat_inverse(to_rat(v.H));
  Int d = denominator_lcm(a);
  RatMat scaled = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) scaled(i, j) *= Rat(d);
  SnfResult s = snf(to_int(scaled));
  const Int pz(v.p);
  long dv = valuation(d, pz);
  std::vector<long> out;
  for (Eigen::Index i = 0; i < s.D.rows(); ++i)
    out.push_back(valuation(s.D(i, i), pz) - dv);
  return out;
}

} // namespace

long distance(const Vertex& v, const Vertex& w) {
  check_compatible(v, w, "distance");
  std::vector<long> e = relative_exponents(v, w);
  long lo = e[0], hi = e[0];
  for (long x : e) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return hi - lo;
}

std::vector<Vertex> geodesic(const Vertex& v, const Vertex& w) {
  check_compatible(v, w, "geodesic");
  if (v == w) return {v};
  std::vector<long> e = relative_exponents(v, w);
  long lo = e[0];
  for (long x : e) lo = std::min(lo, x);
  const long k = -lo; // minimal k with p^k * lat(w) contained in lat(v)
  const long d = distance(v, w);
  const Eigen::Index n = v.n();
  const Int pz(v.p);

  std::vector<Vertex> path{v};
  for (long t = 1; t < d; ++t) {
    // u_t = [p^t * lat(v) + p^k * lat(w)]; shift both by max(0, -k).
    long shift = std::max<long>(0, -k);
    IntMat stack(2 * n, n);
    Int fv = int_pow(pz, static_cast<unsigned long>(t + shift));
    Int fw = int_pow(pz, static_cast<unsigned long>(k + shift));
    for (Eigen::Index r = 0; r < n; ++r) {
      stack.row(r) = fv * v.H.row(r);
      stack.row(n + r) = fw * w.H.row(r);
    }
    path.push_back(canonical_vertex(IntMat(row_lattice_basis(stack)), v.p));
  }
  path.push_back(w);
  return path;
}

Int vertex_degree(int n, const Int& q) {
  Int sum = 0;
  for (int k = 1; k < n; ++k) sum += gaussian_binomial(n, k, q);
  return sum;
}

std::vector<EdgeRep> edge_reps(int n, long p) {
  if (n < 2) throw std::invalid_argument("edge_reps: n >= 2 required");
  std::vector<EdgeRep> out;
  for (int i = 1; i < n; ++i) {
    IntMat m = int_identity(n);
    for (int r = n - i; r < n; ++r) m(r, r) = p;
    EdgeRep rep;
    rep.base = standard_vertex(n, p);
    rep.index = i;
    rep.sub = canonical_vertex(m, p);
    rep.transporter = to_rat(m);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<TriangleRep> triangle_reps(int n, long p) {
  if (n < 2) throw std::invalid_argument("triangle_reps: n >= 2 required");
  (void)p;
  std::vector<TriangleRep> out;
  for (int i = 2; i <= n - 1; ++i)
    for (int j = 1; j < i; ++j) out.push_back(TriangleRep{i, j});
  return out;
}

std::pair<bool, std::optional<RatMat>> minus_type(int n, int i, long p) {
  if (i < 1 || i > n - 1) throw std::invalid_argument("minus_type: index out of range");
  if (2 * i != n) return {false, std::nullopt};
  const int h = n / 2;
  RatMat g = RatMat::Zero(n, n);
  for (int r = 0; r < h; ++r) {
    g(r, h + r) = Rat(p);
    g(h + r, r) = 1;
  }
  return {true, g};
}

FpMat neighbor_subspace(const Vertex& v) {
  FpMat reduced = fp_image(v.H, v.p);
  FpMat r = rref(reduced);
  if (r.rows() == 0 || r.rows() == v.n())
    throw std::invalid_argument("neighbor_subspace: vertex is not a neighbor of the standard vertex");
  Int det = abs(int_det(v.H).get_num());
  if (det != int_pow(Int(v.p), static_cast<unsigned long>(v.n() - r.rows())))
    throw std::invalid_argument("neighbor_subspace: vertex is not a neighbor of the standard vertex");
  return r;
}

} // namespace sunit
