#pragma once

#include "sunit/building.hpp"
#include "sunit/fpgroup.hpp"

namespace sunit {

/// GL_n(Z) with a verified built-in presentation and constructive
/// membership.  Generators: n = 2 the standard s, t plus j = diag(1,-1);
/// n >= 3 elementary matrices x{i}{j} with Steinberg relations plus
/// j = diag(1,..,1,-1).
struct BaseGroup {
  int n = 0;
  Presentation pres;                      // full GL_n(Z), with images
  std::vector<std::string> sl_generators; // determinant-one generators

  /// Sub-presentation on the determinant-one generators (relators not
  /// involving j).
  Presentation sl_presentation() const;
};

/// Supported ranks: 2, 3, 4.  Every relator is verified by evaluation.
BaseGroup base_group(int n);

/// Writes an integral matrix of determinant +-1 as a word in the base
/// generators; evaluate(result) = g exactly.
Word rewrite_in_base(const RatMat& g, const BaseGroup& b);

/// Orbit of a subspace under the mod-p images of named generators, with
/// transporter words and Schreier stabilizer generators.
struct SubspaceOrbit {
  FpMat root;
  std::vector<std::string> orbit_keys;          // BFS discovery order
  std::map<std::string, Word> transporter;      // key -> word t, root*img(t) = W
  std::vector<Word> stabilizer_gens;            // nonempty, deduplicated
};

/// BFS orbit computation; requires (and checks) that the orbit covers
/// the whole Grassmannian of dim(w0) subspaces -- a short orbit
/// contradicts strong approximation and is a hard error.
SubspaceOrbit subspace_orbit(const std::vector<std::pair<std::string, RatMat>>& gens,
                             const FpMat& w0, long p);

SubspaceOrbit subspace_orbit(const BaseGroup& b, const FpMat& w0, long p);

} // namespace sunit
