#pragma once

#include "sunit/numeric.hpp"

#include <map>
#include <string>
#include <vector>

namespace sunit {

struct Letter {
  std::string gen;
  int exp; // +1 or -1
  bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};

/// Freely reduced word over named generators.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) { reduce(); }

  static Word letter(const std::string& gen, int exp = 1);

  /// Parses the grammar `a*b^-1*c^3`; names match [A-Za-z][A-Za-z0-9_]*.
  static Word parse(const std::string& text);

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word inverse() const;
  Word operator*(const Word& o) const;
  Word pow(long e) const;

  /// Exponent-compressed display form, e.g. "a*b^-1*c^3"; "1" when empty.
  std::string str() const;

  bool operator==(const Word& o) const { return letters_ == o.letters_; }
  bool operator<(const Word& o) const;

  /// Net exponent of a generator (abelianized coefficient).
  long net_exponent(const std::string& gen) const;

private:
  void reduce();
  std::vector<Letter> letters_;
};

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::map<std::string, RatMat> images; // empty when no images attached

  bool has_images() const { return !images.empty(); }
  /// Checks relators reference declared generators and image sizes agree.
  void validate() const;
};

/// Exact matrix product of images/inverses along the word.
RatMat evaluate(const Word& w, const std::map<std::string, RatMat>& images,
                Eigen::Index dim);

struct AbelianInvariants {
  long free_rank = 0;
  std::vector<Int> torsion; // invariant factors > 1, divisibility order
  bool operator==(const AbelianInvariants& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
};

AbelianInvariants abelian_invariants(const Presentation& p);

/// Conservative Tietze simplification: drop empty/duplicate relators,
/// substitute generators defined by relators of length <= 2.  Abelian
/// invariants are checked unchanged.
Presentation simplify(const Presentation& p);

/// Plain-text presentation format: a `gens:` line then one relator per line.
std::string to_text(const Presentation& p);
Presentation parse_text(const std::string& text);

} // namespace sunit
