#include "sunit/engine.hpp"

#include <numeric>
#include <sstream>

namespace sunit {

std::string ProvenanceEntry::describe() const {
  std::ostringstream out;
  out << tag;
  if (prime) out << " p=" << prime;
  if (edge) out << " edge=" << edge;
  if (tri_i) out << " triangle=(" << tri_i << "," << tri_j << ")";
  if (schreier >= 0) out << " schreier=" << schreier;
  return out.str();
}

bool VerifyReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

namespace detail {

RatMat rat_scale(const RatMat& m, const Rat& c) {
  RatMat out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) *= c;
  return out;
}

void check_s_unit(const GroupLevel& level, const RatMat& g) {
  Int den = denominator_lcm(g);
  Rat det = rat_det(g);
  if (det == 0) throw std::invalid_argument("rewrite: singular matrix");
  Int dnum = abs(det.get_num()), dden = det.get_den();
  for (long p : level.primes) {
    Int pz(p);
    while (den % pz == 0) den /= pz;
    while (dnum % pz == 0) dnum /= pz;
    while (dden % pz == 0) dden /= pz;
  }
  if (den != 1 || dnum != 1 || dden != 1)
    throw std::invalid_argument(
        "rewrite: input is not a unit of the S-order (support outside S)");
}

void verify_new_relators(const Presentation& pres,
                         const std::vector<ProvenanceEntry>& prov, std::size_t from) {
  const Eigen::Index dim = pres.images.begin()->second.rows();
  for (std::size_t k = from; k < pres.relators.size(); ++k)
    if (!is_identity(evaluate(pres.relators[k], pres.images, dim)))
      throw std::logic_error("extend_level: relator verification failed [" +
                             prov[k].describe() + "]: " + pres.relators[k].str());
}

} // namespace detail

namespace {

class MatrixBaseRewriter : public LevelBase {
public:
  explicit MatrixBaseRewriter(BaseGroup b) : base_(std::move(b)) {}
  Word rewrite(const RatMat& g) const override { return rewrite_in_base(g, base_); }

private:
  BaseGroup base_;
};

std::string zname(long p) { return "z" + std::to_string(p); }

// First-step alignment: an element e (as word and matrix) with
// [L0] * e = u1, for any neighbor u1 of the standard vertex.
std::pair<Word, RatMat> align_step(const GroupLevel& ext_level, const MatrixExtension& ext,
                                   const Vertex& u1) {
  const int n = ext_level.n;
  FpMat w = neighbor_subspace(u1);
  const int dsub = static_cast<int>(w.rows());
  const int type = n - dsub;
  const SubspaceOrbit& orbit = ext.orbits_by_dim[static_cast<std::size_t>(dsub - 1)];
  if (type <= n / 2) {
    const MatrixEdgeData& e = ext.edges[static_cast<std::size_t>(type - 1)];
    Word tw = orbit.transporter.at(w.key());
    Word ew = Word::letter(e.w_name) * tw;
    RatMat em = e.w_image * evaluate(tw, ext_level.pres.images, n);
    return {ew, em};
  }
  // Fused orbit: a type-t edge is the w_{n-t} representative crossed
  // backwards; [L0 * w_{n-t}^{-1}] is the neighbor whose subspace is
  // spanned by the last n-t coordinates.
  const int tp = n - type;
  const MatrixEdgeData& e = ext.edges[static_cast<std::size_t>(tp - 1)];
  FpMat wstart;
  wstart.p = u1.p;
  wstart.m = FpEntryMat::Zero(tp, n);
  for (int r = 0; r < tp; ++r) wstart.m(r, n - tp + r) = 1;
  Word s = orbit.transporter.at(wstart.key()).inverse() * orbit.transporter.at(w.key());
  Word ew = Word::letter(e.w_name, -1) * s;
  RatMat em = rat_inverse(e.w_image) * evaluate(s, ext_level.pres.images, n);
  return {ew, em};
}

} // namespace

GroupLevel base_level_matrix(int n) {
  BaseGroup b = base_group(n);
  GroupLevel level;
  level.kind = GroupLevel::Kind::matrix;
  level.n = n;
  level.pres = b.pres;
  level.provenance.assign(level.pres.relators.size(), ProvenanceEntry{"base"});
  RatMat minus_one = detail::rat_scale(rat_identity(n), Rat(-1));
  level.center_words.push_back(rewrite_in_base(minus_one, b).str());
  level.base = std::make_shared<MatrixBaseRewriter>(std::move(b));
  return level;
}

StabilizerData vertex_stabilizer(const GroupLevel& level, long p) {
  for (long q : level.primes)
    if (q == p) throw std::invalid_argument("vertex_stabilizer: p already in S");
  if (!is_prime(p)) throw std::invalid_argument("vertex_stabilizer: p not prime");

  StabilizerData out;
  out.p = p;
  out.z_name = zname(p);
  out.z_image = detail::rat_scale(rat_identity(level.n), Rat(p));
  out.pres = level.pres;
  out.pres.generators.push_back(out.z_name);
  out.pres.images[out.z_name] = out.z_image;
  Word z = Word::letter(out.z_name);
  for (const std::string& g : level.pres.generators) {
    Word gg = Word::letter(g);
    out.pres.relators.push_back(z * gg * z.inverse() * gg.inverse());
  }
  out.pres.validate();
  return out;
}

Word stabilizer_rewrite(const GroupLevel& level, long p, const std::string& z_name,
                        const RatMat& h) {
  Rat det = rat_det(h);
  if (det == 0) throw std::invalid_argument("stabilizer_rewrite: singular matrix");
  long v = valuation(det, Int(p));
  if (v % level.n != 0)
    throw std::invalid_argument(
        "stabilizer_rewrite: determinant valuation not divisible by n; the element "
        "does not stabilize the standard vertex class");
  long a = v / level.n;
  Rat scale = a >= 0 ? make_rat(1, int_pow(Int(p), static_cast<unsigned long>(a)))
                     : Rat(int_pow(Int(p), static_cast<unsigned long>(-a)));
  RatMat residual = detail::rat_scale(h, scale);
  Word rest = rewrite(level, residual);
  return Word::letter(z_name).pow(a) * rest;
}

GroupLevel extend_level(const GroupLevel& level, long p) {
  if (level.kind != GroupLevel::Kind::matrix)
    throw std::invalid_argument(
        "extend_level: only matrix levels extend here; quaternion levels are built by "
        "quat_s_presentation");
  ensure_single_vertex_orbit(vertex_orbit_count(1, level.n).first);

  const int n = level.n;
  StabilizerData stab = vertex_stabilizer(level, p);

  auto ext = std::make_shared<MatrixExtension>();
  ext->p = p;
  ext->z_name = stab.z_name;

  GroupLevel out;
  out.kind = GroupLevel::Kind::matrix;
  out.n = n;
  out.primes = level.primes;
  out.primes.push_back(p);
  out.prev = std::make_shared<GroupLevel>(level);
  out.center_words = level.center_words;
  out.center_words.push_back(stab.z_name);

  // Stabilizer presentation: previous level plus the central z_p.
  out.pres = stab.pres;
  out.provenance = level.provenance;
  for (std::size_t k = level.pres.relators.size(); k < out.pres.relators.size(); ++k) {
    ProvenanceEntry e{"center-commutator"};
    e.prime = p;
    out.provenance.push_back(e);
  }

  // Subspace orbits over the previous level's generators, every dimension.
  std::vector<std::pair<std::string, RatMat>> gens;
  for (const std::string& g : level.pres.generators)
    gens.emplace_back(g, level.pres.images.at(g));
  for (int d = 1; d < n; ++d) {
    FpMat w0;
    w0.p = p;
    w0.m = FpEntryMat::Zero(d, n);
    for (int r = 0; r < d; ++r) w0.m(r, r) = 1;
    ext->orbits_by_dim.push_back(subspace_orbit(gens, w0, p));
  }

  // Edge letters w_{p,i}, i = 1..floor(n/2); the middle index of an even
  // rank is the minus-type representative with the block witness.
  auto reps = edge_reps(n, p);
  for (int i = 1; i <= n / 2; ++i) {
    MatrixEdgeData e;
    e.index = i;
    auto [is_minus, witness] = minus_type(n, i, p);
    e.minus = is_minus;
    e.w_name = n == 2 ? "w" + std::to_string(p)
                      : "w" + std::to_string(p) + "_" + std::to_string(i);
    e.w_image = is_minus ? *witness : reps[static_cast<std::size_t>(i - 1)].transporter;
    out.pres.generators.push_back(e.w_name);
    out.pres.images[e.w_name] = e.w_image;
    ext->edges.push_back(std::move(e));
  }

  const std::size_t first_new = out.pres.relators.size();
  Word z = Word::letter(stab.z_name);

  for (const MatrixEdgeData& e : ext->edges) {
    Word w = Word::letter(e.w_name);
    const SubspaceOrbit& orbit =
        ext->orbits_by_dim[static_cast<std::size_t>(n - e.index - 1)];
    if (!e.minus) {
      out.pres.relators.push_back(w * z * w.inverse() * z.inverse());
      ProvenanceEntry pe{"edge-plus"};
      pe.prime = p;
      pe.edge = e.index;
      out.provenance.push_back(pe);
      int k = 0;
      for (const Word& h : orbit.stabilizer_gens) {
        RatMat conj = e.w_image * evaluate(h, out.pres.images, n) * rat_inverse(e.w_image);
        Word rw = stabilizer_rewrite(level, p, stab.z_name, conj);
        out.pres.relators.push_back(w * h * w.inverse() * rw.inverse());
        ProvenanceEntry pk{"edge-plus"};
        pk.prime = p;
        pk.edge = e.index;
        pk.schreier = k++;
        out.provenance.push_back(pk);
      }
    } else {
      out.pres.relators.push_back(w * z * w * z.pow(-2));
      ProvenanceEntry pe{"edge-minus"};
      pe.prime = p;
      pe.edge = e.index;
      out.provenance.push_back(pe);
      out.pres.relators.push_back(w * w * z.inverse());
      ProvenanceEntry ps{"minus-square"};
      ps.prime = p;
      ps.edge = e.index;
      out.provenance.push_back(ps);
      int k = 0;
      for (const Word& h : orbit.stabilizer_gens) {
        RatMat mid = e.w_image * evaluate(h, out.pres.images, n) * e.w_image;
        Word rw = stabilizer_rewrite(level, p, stab.z_name, mid);
        out.pres.relators.push_back(w * h * w * rw.inverse());
        ProvenanceEntry pk{"edge-minus"};
        pk.prime = p;
        pk.edge = e.index;
        pk.schreier = k++;
        out.provenance.push_back(pk);
      }
    }
  }

  // Triangle relators: walk each 2-cell boundary, re-anchoring every
  // edge at the standard vertex.
  out.mext = ext;
  for (const TriangleRep& tri : triangle_reps(n, p)) {
    Vertex v0 = standard_vertex(n, p);
    auto diag_vertex = [&](int idx) {
      IntMat m = int_identity(n);
      for (int r = n - idx; r < n; ++r) m(r, r) = p;
      return canonical_vertex(m, p);
    };
    Vertex mj = diag_vertex(tri.j);
    Vertex mi = diag_vertex(tri.i);

    auto [e1w, e1m] = align_step(out, *ext, mj);
    Word cw = e1w;
    RatMat cm = e1m;

    Vertex x2 = act(mi, rat_inverse(cm));
    auto [e2w, e2m] = align_step(out, *ext, x2);
    cw = e2w * cw;
    cm = e2m * cm;

    Vertex x3 = canonical_vertex(rat_inverse(cm), p);
    auto [e3w, e3m] = align_step(out, *ext, x3);
    cw = e3w * cw;
    cm = e3m * cm;

    if (!(canonical_vertex(cm, p) == standard_vertex(n, p)))
      throw std::logic_error(
          "extend_level: triangle cycle does not stabilize the base vertex");
    Word rw = stabilizer_rewrite(level, p, stab.z_name, cm);
    out.pres.relators.push_back(cw * rw.inverse());
    ProvenanceEntry pt{"triangle"};
    pt.prime = p;
    pt.tri_i = tri.i;
    pt.tri_j = tri.j;
    out.provenance.push_back(pt);
  }

  out.pres.validate();
  detail::verify_new_relators(out.pres, out.provenance, first_new);
  return out;
}

Word rewrite(const GroupLevel& level, const RatMat& g) {
  if (g.rows() != level.n || g.cols() != level.n)
    throw std::invalid_argument("rewrite: size mismatch");
  detail::check_s_unit(level, g);
  if (!level.prev) {
    if (!level.base) throw std::logic_error("rewrite: level has no base data");
    return level.base->rewrite(g);
  }

  const long p = level.primes.back();
  const int n = level.n;

  if (level.qext && level.qext->ramified) {
    // Degenerate building: strip powers of the normalizing element.
    const QuatEdgeData& lam = level.qext->edges.front();
    Rat det = rat_det(g);
    long v = valuation(det, Int(p));
    if (v % 2 != 0)
      throw std::logic_error("rewrite: odd norm valuation in the regular representation");
    long a = v / 2;
    RatMat lam_inv = rat_inverse(lam.w_image);
    RatMat cur = g;
    for (long t = 0; t < std::abs(a); ++t) cur = cur * (a > 0 ? lam_inv : lam.w_image);
    Word rest = rewrite(*level.prev, cur);
    return rest * Word::letter(lam.w_name).pow(a);
  }

  Vertex v0 = standard_vertex(n, p);
  RatMat cur = g;
  Vertex v = canonical_vertex(cur, p);
  Word suffix;
  long d = distance(v0, v);
  while (d > 0) {
    std::vector<Vertex> path = geodesic(v0, v);
    const Vertex& u1 = path[1];
    Word ew;
    RatMat em;
    if (level.mext) {
      auto [w_, m_] = align_step(level, *level.mext, u1);
      ew = w_;
      em = m_;
    } else {
      const QuatExtension& q = *level.qext;
      auto it = q.neighbor_edge.find(u1.key());
      if (it == q.neighbor_edge.end())
        throw std::logic_error("rewrite: neighbor missing from the orbit data");
      const QuatEdgeData& e = q.edges[static_cast<std::size_t>(it->second)];
      Word tw = q.neighbor_transporter.at(u1.key());
      ew = Word::letter(e.w_name) * tw;
      em = e.w_image * evaluate(tw, level.pres.images, n);
    }
    cur = cur * rat_inverse(em);
    suffix = ew * suffix;
    Vertex vnew = canonical_vertex(cur, p);
    long dnew = distance(v0, vnew);
    if (dnew != d - 1)
      throw std::logic_error("rewrite: geodesic step failed to reduce the distance");
    v = vnew;
    d = dnew;
  }

  // Stabilizer residue: strip the central homothety and recurse.
  const std::string& z = level.mext ? level.mext->z_name : level.qext->z_name;
  Rat det = rat_det(cur);
  long vdet = valuation(det, Int(p));
  if (vdet % n != 0)
    throw std::logic_error("rewrite: stabilizer residue has bad determinant valuation");
  long a = vdet / n;
  Rat scale = a >= 0 ? make_rat(1, int_pow(Int(p), static_cast<unsigned long>(a)))
                     : Rat(int_pow(Int(p), static_cast<unsigned long>(-a)));
  cur = detail::rat_scale(cur, scale);
  Word rest = rewrite(*level.prev, cur);
  return Word::letter(z).pow(a) * rest * suffix;
}

VerifyReport verify_level(const GroupLevel& level) {
  VerifyReport report;
  const Eigen::Index dim = level.n;
  for (std::size_t k = 0; k < level.pres.relators.size(); ++k) {
    VerifyEntry e;
    ProvenanceEntry pv = k < level.provenance.size() ? level.provenance[k] : ProvenanceEntry{"?"};
    e.name = "relator " + std::to_string(k) + " [" + pv.describe() + "]";
    try {
      e.pass = is_identity(evaluate(level.pres.relators[k], level.pres.images, dim));
      if (!e.pass)
        e.detail = "does not evaluate to the identity: " + level.pres.relators[k].str();
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = ex.what();
    }
    report.entries.push_back(std::move(e));
  }
  for (const std::string& g : level.pres.generators) {
    VerifyEntry e;
    e.name = "round-trip " + g;
    try {
      Word w = rewrite(level, level.pres.images.at(g));
      e.pass = mat_eq(evaluate(w, level.pres.images, dim), level.pres.images.at(g));
      if (!e.pass) e.detail = "rewrite does not evaluate back to the generator";
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = ex.what();
    }
    report.entries.push_back(std::move(e));
  }
  {
    VerifyEntry e;
    e.name = "abelian-invariants";
    try {
      AbelianInvariants inv = abelian_invariants(level.pres);
      std::ostringstream os;
      os << "free rank " << inv.free_rank << ", torsion [";
      for (std::size_t i = 0; i < inv.torsion.size(); ++i)
        os << (i ? ", " : "") << inv.torsion[i].get_str();
      os << "]";
      e.detail = os.str();
      e.pass = true;
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = ex.what();
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::pair<long, long> vertex_orbit_count(long k, long n) {
  if (k < 1 || n < 1) throw std::invalid_argument("vertex_orbit_count: bad input");
  long t = std::gcd(k, n);
  return {t, k / t};
}

void ensure_single_vertex_orbit(long t) {
  if (t != 1)
    throw std::runtime_error(
        "this build handles class number one only: the vertex set has " +
        std::to_string(t) +
        " orbits, and the multi-orbit representative tree of the general algorithm "
        "requires lattice-isomorphism testing that is out of scope");
}

bool steinitz_orbit_test(const std::vector<long>& invariant_factors,
                         const std::vector<long>& st_l, const std::vector<long>& st_m,
                         const std::vector<long>& p_class, long n) {
  const std::size_t r = invariant_factors.size();
  if (st_l.size() != r || st_m.size() != r || p_class.size() != r)
    throw std::invalid_argument("steinitz_orbit_test: component count mismatch");
  for (long d : invariant_factors)
    if (d < 1) throw std::invalid_argument("steinitz_orbit_test: bad invariant factor");

  auto reduce = [&](std::vector<long> v) {
    for (std::size_t i = 0; i < r; ++i) {
      v[i] %= invariant_factors[i];
      if (v[i] < 0) v[i] += invariant_factors[i];
    }
    return v;
  };
  std::vector<long> diff(r);
  for (std::size_t i = 0; i < r; ++i) diff[i] = st_l[i] - st_m[i];
  diff = reduce(diff);

  std::vector<long> q(r);
  for (std::size_t i = 0; i < r; ++i) q[i] = n * p_class[i];
  q = reduce(q);

  std::vector<long> x(r, 0);
  for (;;) {
    if (x == diff) return true;
    for (std::size_t i = 0; i < r; ++i) x[i] = (x[i] + q[i]) % invariant_factors[i];
    bool zero = true;
    for (long xi : x)
      if (xi != 0) zero = false;
    if (zero) return false;
  }
}

} // namespace sunit
