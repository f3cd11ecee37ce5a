#pragma once

#include "sunit/glnz.hpp"

#include <memory>

namespace sunit {

/// Tags one relator with the assembly step that produced it.
struct ProvenanceEntry {
  std::string tag; // base | unit-table | center-commutator | edge-plus |
                   // edge-minus | minus-square | triangle | ramified-conj
  long prime = 0;
  int edge = 0;
  int tri_i = 0, tri_j = 0;
  int schreier = -1;

  std::string describe() const;
};

/// Constructive membership at the bottom of a level chain.
class LevelBase {
public:
  virtual ~LevelBase() = default;
  virtual Word rewrite(const RatMat& g) const = 0;
};

struct MatrixEdgeData {
  int index = 0; // i in 1..floor(n/2); |L0/M_i| = p^i
  bool minus = false;
  std::string w_name;
  RatMat w_image;
};

struct MatrixExtension {
  long p = 0;
  std::string z_name;
  std::vector<MatrixEdgeData> edges;
  std::vector<SubspaceOrbit> orbits_by_dim; // [d-1] = dim-d orbit over the previous level
};

/// Tree-extension data for a split quaternion prime (or the degenerate
/// ramified case).  Filled in by the quaternion module; the engine only
/// needs vertex keys, transporter words and images.
struct QuatEdgeData {
  bool minus = false;
  std::string w_name;
  RatMat w_image;      // regular-representation matrix
  std::string rep_key; // canonical key of the representative neighbor vertex
};

struct QuatExtension {
  long p = 0;
  bool ramified = false;
  std::string z_name; // empty in the ramified case
  std::vector<QuatEdgeData> edges;
  std::vector<int> orbit_sizes;                     // stabilizer orbit decomposition
  std::map<std::string, Word> neighbor_transporter; // vertex key -> word over prev gens
  std::map<std::string, int> neighbor_edge;         // vertex key -> index into edges
};

/// A fully computed S-level: prime set, verified presentation with
/// matrix images, and enough data to rewrite arbitrary S-units in the
/// generators.
struct GroupLevel {
  enum class Kind { matrix, quaternion };
  Kind kind = Kind::matrix;
  int n = 0; // image dimension (matrix rank; 4 for quaternion levels)
  std::vector<long> primes;
  Presentation pres;
  std::vector<ProvenanceEntry> provenance; // parallel to pres.relators
  std::vector<std::string> center_words;   // words generating the central scalars

  std::shared_ptr<const LevelBase> base; // set when primes is empty
  std::shared_ptr<const GroupLevel> prev;
  std::shared_ptr<const MatrixExtension> mext;
  std::shared_ptr<const QuatExtension> qext;
};

/// S = {} level for GL_n(Z) (built-in presentation and membership).
GroupLevel base_level_matrix(int n);

struct StabilizerData {
  long p = 0;
  std::string z_name;
  RatMat z_image; // p * identity, central
  Presentation pres;
};

/// Stabilizer of the standard vertex in the S u {p} group: the level
/// extended by the central homothety z_p.
StabilizerData vertex_stabilizer(const GroupLevel& level, long p);

/// Membership in <level, z_p>: strips z_p^a with a = v_p(det h)/n and
/// rewrites the rest in the level; rejects non-stabilizing input.
Word stabilizer_rewrite(const GroupLevel& level, long p, const std::string& z_name,
                        const RatMat& h);

/// Adjoins one prime to a matrix level via the building action; all
/// relators are verified by exact evaluation.
GroupLevel extend_level(const GroupLevel& level, long p);

/// Writes an S-unit as a word in the level generators, peeling one
/// geodesic step at a time (the distance must drop by exactly 1 per
/// step) and recursing into lower levels.
Word rewrite(const GroupLevel& level, const RatMat& g);

struct VerifyEntry {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool all_pass() const;
};

/// Re-evaluates every relator, round-trips every generator through
/// rewrite, and recomputes the abelian invariants.
VerifyReport verify_level(const GroupLevel& level);

/// Number of vertex orbits t = gcd(k, n) for [p] of order k in the
/// S-class group, plus the minimal translation exponent k/t.
std::pair<long, long> vertex_orbit_count(long k, long n);

/// Guard for the class-number-one restriction.
void ensure_single_vertex_orbit(long t);

/// Steinitz-class test: stL and stM agree modulo the cyclic subgroup
/// generated by n * p_class in the finite abelian group with the given
/// invariant factors (additive convention).
bool steinitz_orbit_test(const std::vector<long>& invariant_factors,
                         const std::vector<long>& st_l, const std::vector<long>& st_m,
                         const std::vector<long>& p_class, long n);

// Shared helpers for level assembly (also used by the quaternion module).
namespace detail {
RatMat rat_scale(const RatMat& m, const Rat& c);
void check_s_unit(const GroupLevel& level, const RatMat& g);
void verify_new_relators(const Presentation& pres,
                         const std::vector<ProvenanceEntry>& prov, std::size_t from);
} // namespace detail

} // namespace sunit
