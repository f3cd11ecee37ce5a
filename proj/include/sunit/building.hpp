#pragma once

#include "sunit/modp.hpp"
#include "sunit/normal_form.hpp"

#include <optional>

namespace sunit {

/// Vertex of the building of SL_n(Q_p): the canonical representative of
/// a homothety class of p-local lattices, stored as an HNF basis whose
/// elementary divisors are p-powers with minimal exponent 0.
struct Vertex {
  long p = 0;
  IntMat H;

  Eigen::Index n() const { return H.rows(); }
  std::string key() const { return std::to_string(p) + "#" + mat_key(H); }
  bool operator==(const Vertex& o) const { return p == o.p && mat_eq(H, o.H); }
  bool operator!=(const Vertex& o) const { return !(*this == o); }
  bool operator<(const Vertex& o) const { return key() < o.key(); }
};

struct EdgeRep {
  Vertex base;           // standard vertex
  int index;             // i in 1..n-1: |L/M_i| = p^i
  Vertex sub;            // class of M_i
  RatMat transporter;    // w_i with (standard lattice) * w_i = M_i
};

struct TriangleRep {
  int i, j; // n-1 >= i > j >= 1
};

Vertex standard_vertex(int n, long p);

/// Canonical vertex of the p-local row lattice of B (square, full rank).
Vertex canonical_vertex(const RatMat& b, long p);
Vertex canonical_vertex(const IntMat& b, long p);

/// Right action [H] * g.
Vertex act(const Vertex& v, const RatMat& g);

/// One vertex per proper nonzero subspace of L/pL; the full link.
std::vector<Vertex> neighbors(const Vertex& v);

long distance(const Vertex& v, const Vertex& w);

/// Geodesic v = u_0, ..., u_d = w along the standard chain
/// p^t L + p^k M; unique on a tree, length = distance.
std::vector<Vertex> geodesic(const Vertex& v, const Vertex& w);

Int vertex_degree(int n, const Int& q);

std::vector<EdgeRep> edge_reps(int n, long p);
std::vector<TriangleRep> triangle_reps(int n, long p);

/// Minus-type test for the edge of index i: true iff 2i = n, with the
/// block witness g = [[0, p*1],[1, 0]] satisfying L0*g = M_{n/2} and
/// g^2 = p*1.
std::pair<bool, std::optional<RatMat>> minus_type(int n, int i, long p);

/// Subspace of L/pL attached to a neighbor of the standard vertex
/// (its lattice reduced mod p, in RREF).
FpMat neighbor_subspace(const Vertex& v);

} // namespace sunit
