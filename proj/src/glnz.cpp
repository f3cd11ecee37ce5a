#include "sunit/glnz.hpp"

#include <set>

namespace sunit {

namespace {

std::string xname(int i, int j) {
  return "x" + std::to_string(i + 1) + std::to_string(j + 1);
}

RatMat elementary(int n, int i, int j) {
  RatMat m = rat_identity(n);
  m(i, j) = 1;
  return m;
}

void verify_relators(const Presentation& p, const char* who) {
  const Eigen::Index dim = p.images.begin()->second.rows();
  for (const Word& r : p.relators)
    if (!is_identity(evaluate(r, p.images, dim)))
      throw std::logic_error(std::string(who) + ": relator '" + r.str() +
                             "' does not evaluate to the identity");
}

} // namespace

Presentation BaseGroup::sl_presentation() const {
  std::set<std::string> sl(sl_generators.begin(), sl_generators.end());
  Presentation out;
  out.generators = sl_generators;
  for (const Word& r : pres.relators) {
    bool ok = true;
    for (const Letter& l : r.letters())
      if (!sl.count(l.gen)) { ok = false; break; }
    if (ok) out.relators.push_back(r);
  }
  for (const std::string& g : sl_generators) out.images[g] = pres.images.at(g);
  out.validate();
  return out;
}

BaseGroup base_group(int n) {
  if (n < 2 || n > 4)
    throw std::invalid_argument("base_group: supported ranks are 2, 3, 4");

  BaseGroup b;
  b.n = n;
  Presentation& p = b.pres;

  if (n == 2) {
    p.generators = {"s", "t", "j"};
    p.images["s"] = rat_mat({{0, -1}, {1, 0}});
    p.images["t"] = rat_mat({{1, 1}, {0, 1}});
    p.images["j"] = rat_mat({{1, 0}, {0, -1}});
    Word s = Word::letter("s"), t = Word::letter("t"), j = Word::letter("j");
    Word st = s * t;
    p.relators = {
        s.pow(4),
        st.pow(6),
        s.pow(2) * st.pow(-3),
        j.pow(2),
        j * s * j.inverse() * s,
        j * t * j.inverse() * t,
    };
    b.sl_generators = {"s", "t"};
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        p.generators.push_back(xname(i, j));
        p.images[xname(i, j)] = elementary(n, i, j);
        b.sl_generators.push_back(xname(i, j));
      }
    p.generators.push_back("j");
    RatMat jm = rat_identity(n);
    jm(n - 1, n - 1) = -1;
    p.images["j"] = jm;

    // Steinberg commutator relations.
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) pos.emplace_back(i, j);
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t c = a + 1; c < pos.size(); ++c) {
        auto [i, j] = pos[a];
        auto [k, l] = pos[c];
        if (j != k && l != i) {
          Word xa = Word::letter(xname(i, j)), xb = Word::letter(xname(k, l));
          p.relators.push_back(xa * xb * xa.inverse() * xb.inverse());
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (i == j || j == k || i == k) continue;
          Word xa = Word::letter(xname(i, j)), xb = Word::letter(xname(j, k));
          Word xc = Word::letter(xname(i, k));
          p.relators.push_back(xa * xb * xa.inverse() * xb.inverse() * xc.inverse());
        }
    // Extra relator (x12 x21^-1 x12)^4.
    Word w = Word::letter(xname(0, 1)) * Word::letter(xname(1, 0), -1) *
             Word::letter(xname(0, 1));
    p.relators.push_back(w.pow(4));

    // j = diag(1,..,1,-1): order two, conjugation inverts x_ab exactly
    // when one of a, b is the last coordinate.
    Word j = Word::letter("j");
    p.relators.push_back(j.pow(2));
    for (auto [a, c] : pos) {
      int sign = (a == n - 1) != (c == n - 1) ? -1 : 1;
      Word x = Word::letter(xname(a, c));
      p.relators.push_back(j * x * j.inverse() * x.pow(-sign));
    }
  }

  p.validate();
  verify_relators(p, "base_group");
  return b;
}

// ---------------------------------------------------------------------
// Constructive membership.

namespace {

// Word for the elementary row operation row_i += c * row_j as a left
// factor; for n = 2 the off-diagonal elementaries are words in s, t.
Word elementary_word(int n, int i, int j, const Int& c) {
  if (c == 0) return Word();
  if (!c.fits_slong_p())
    throw std::invalid_argument("rewrite_in_base: elementary exponent too large");
  long e = c.get_si();
  if (n == 2) {
    Word base;
    if (i == 0 && j == 1) {
      base = Word::letter("t");
    } else {
      base = Word::letter("s", -1) * Word::letter("t", -1) * Word::letter("s");
    }
    return base.pow(e);
  }
  return Word::letter(xname(i, j)).pow(e);
}

// Word for the sign flip of rows i and j (image -1 on those coordinates).
Word pair_flip_word(int n, int i, int j) {
  if (n == 2) return Word::letter("s").pow(2);
  Word r = Word::letter(xname(i, j)) * Word::letter(xname(j, i), -1) *
           Word::letter(xname(i, j));
  return r.pow(2);
}

} // namespace

Word rewrite_in_base(const RatMat& g, const BaseGroup& b) {
  const int n = b.n;
  if (g.rows() != n || g.cols() != n)
    throw std::invalid_argument("rewrite_in_base: size mismatch");
  if (!is_integral(g))
    throw std::invalid_argument("rewrite_in_base: matrix is not integral");
  Rat det = rat_det(g);
  if (det != 1 && det != -1)
    throw std::invalid_argument("rewrite_in_base: determinant is not a unit");

  IntMat m = to_int(g);
  std::vector<Word> ops; // left factors, in application order

  auto apply_row_op = [&](int i, int j, const Int& c) {
    if (c == 0) return;
    m.row(i) += c * m.row(j);
    ops.push_back(elementary_word(n, i, j, c));
  };

  // Phase 1: upper-triangularize; pivots favor minimal absolute value.
  for (int col = 0; col < n; ++col) {
    for (;;) {
      int best = -1;
      int count = 0;
      for (int r = col; r < n; ++r) {
        if (m(r, col) == 0) continue;
        ++count;
        if (best < 0 || abs(m(r, col)) < abs(m(best, col))) best = r;
      }
      if (count == 0)
        throw std::logic_error("rewrite_in_base: unexpected singular column");
      if (count == 1 && best == col) break;
      if (count == 1) {
        // Move the lone entry up to the pivot row.
        apply_row_op(col, best, Int(1));
        continue;
      }
      for (int r = col; r < n; ++r) {
        if (r == best || m(r, col) == 0) continue;
        Int q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), m(r, col).get_mpz_t(),
                    m(best, col).get_mpz_t());
        if (2 * rem >= abs(m(best, col))) q += 1;
        apply_row_op(r, best, Int(-q));
      }
    }
  }

  // Phase 2: clear above the diagonal (diagonal entries are now +-1).
  for (int col = n - 1; col >= 0; --col) {
    for (int r = 0; r < col; ++r) {
      if (m(r, col) == 0) continue;
      Int q = m(r, col) * m(col, col); // division by +-1
      apply_row_op(r, col, Int(-q));
    }
  }

  // Phase 3: sign cleanup on the diagonal.
  std::vector<int> neg;
  for (int i = 0; i < n; ++i) {
    if (m(i, i) == 1) continue;
    if (m(i, i) == -1) neg.push_back(i);
    else throw std::logic_error("rewrite_in_base: non-unit diagonal");
  }
  while (neg.size() >= 2) {
    int i = neg[neg.size() - 2], j = neg[neg.size() - 1];
    m.row(i) = -m.row(i);
    m.row(j) = -m.row(j);
    ops.push_back(pair_flip_word(n, i, j));
    neg.pop_back();
    neg.pop_back();
  }
  Word residual;
  if (neg.size() == 1) {
    int q = neg[0];
    if (q != n - 1) {
      m.row(q) = -m.row(q);
      m.row(n - 1) = -m.row(n - 1);
      ops.push_back(pair_flip_word(n, q, n - 1));
    }
    residual = Word::letter("j");
  }

  // m = E_k ... E_1 * g, so g = inv(E_1) * ... * inv(E_k) * residual.
  Word out;
  for (const Word& op : ops) out = out * op.inverse();
  out = out * residual;

  if (!mat_eq(evaluate(out, b.pres.images, n), g))
    throw std::logic_error("rewrite_in_base: verification failed");
  return out;
}

// ---------------------------------------------------------------------
// Subspace orbits with Schreier generators.

SubspaceOrbit subspace_orbit(const std::vector<std::pair<std::string, RatMat>>& gens,
                             const FpMat& w0, long p) {
  if (gens.empty()) throw std::invalid_argument("subspace_orbit: no generators");
  const int n = static_cast<int>(gens.front().second.rows());
  const int k = static_cast<int>(w0.rows());
  FpMat root = rref(w0);
  if (!(root == w0))
    throw std::invalid_argument("subspace_orbit: w0 must be in reduced echelon form");

  struct GenImage {
    std::string name;
    FpMat fwd, bwd;
  };
  std::vector<GenImage> imgs;
  for (const auto& [name, mat] : gens) {
    FpMat f = fp_image(mat, p);
    imgs.push_back(GenImage{name, f, fp_inverse(f)});
  }

  SubspaceOrbit orbit;
  orbit.root = root;
  orbit.transporter[root.key()] = Word();
  orbit.orbit_keys.push_back(root.key());
  std::map<std::string, FpMat> by_key{{root.key(), root}};
  std::set<std::string> schreier_seen;

  for (std::size_t qi = 0; qi < orbit.orbit_keys.size(); ++qi) {
    FpMat w = by_key.at(orbit.orbit_keys[qi]);
    const Word tw = orbit.transporter.at(orbit.orbit_keys[qi]);
    for (const GenImage& gi : imgs) {
      for (int dir : {1, -1}) {
        FpMat img = rref(fp_mul(w, dir == 1 ? gi.fwd : gi.bwd));
        std::string key = img.key();
        Word step = tw * Word::letter(gi.name, dir);
        auto it = orbit.transporter.find(key);
        if (it == orbit.transporter.end()) {
          orbit.transporter[key] = step;
          orbit.orbit_keys.push_back(key);
          by_key[key] = img;
        } else {
          Word schreier = step * it->second.inverse();
          if (!schreier.empty() && schreier_seen.insert(schreier.str()).second)
            orbit.stabilizer_gens.push_back(schreier);
        }
      }
    }
  }

  Int expected = gaussian_binomial(n, k, Int(p));
  if (Int(static_cast<long>(orbit.orbit_keys.size())) != expected)
    throw std::runtime_error(
        "subspace_orbit: orbit has size " + std::to_string(orbit.orbit_keys.size()) +
        " but the Grassmannian has " + expected.get_str() +
        " points; orbit is not transitive");

  // Each Schreier generator must fix the root subspace mod p.
  for (const Word& s : orbit.stabilizer_gens) {
    FpMat acc = root;
    for (const Letter& l : s.letters()) {
      const GenImage* gi = nullptr;
      for (const GenImage& cand : imgs)
        if (cand.name == l.gen) { gi = &cand; break; }
      if (!gi) throw std::logic_error("subspace_orbit: unknown letter");
      acc = fp_mul(acc, l.exp == 1 ? gi->fwd : gi->bwd);
    }
    if (!(rref(acc) == root))
      throw std::logic_error("subspace_orbit: Schreier generator does not fix the root");
  }
  return orbit;
}

SubspaceOrbit subspace_orbit(const BaseGroup& b, const FpMat& w0, long p) {
  std::vector<std::pair<std::string, RatMat>> gens;
  for (const std::string& g : b.pres.generators) gens.emplace_back(g, b.pres.images.at(g));
  return subspace_orbit(gens, w0, p);
}

} // namespace sunit

