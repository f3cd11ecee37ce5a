#include "sunit/word.hpp"

#include "sunit/normal_form.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace sunit {

Word Word::letter(const std::string& gen, int exp) {
  if (exp != 1 && exp != -1) throw std::invalid_argument("Word::letter: exp must be +-1");
  return Word({Letter{gen, exp}});
}

void Word::reduce() {
  std::vector<Letter> out;
  for (const Letter& l : letters_) {
    if (l.exp != 1 && l.exp != -1)
      throw std::invalid_argument("Word: letter exponent must be +-1");
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  letters_ = std::move(out);
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push_back(Letter{it->gen, -it->exp});
  return Word(std::move(out));
}

Word Word::operator*(const Word& o) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), o.letters_.begin(), o.letters_.end());
  return Word(std::move(out));
}

Word Word::pow(long e) const {
  Word base = e >= 0 ? *this : inverse();
  long n = e >= 0 ? e : -e;
  Word r;
  for (long i = 0; i < n; ++i) r = r * base;
  return r;
}

bool Word::operator<(const Word& o) const {
  if (letters_.size() != o.letters_.size())
    return letters_.size() < o.letters_.size();
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].gen != o.letters_[i].gen)
      return letters_[i].gen < o.letters_[i].gen;
    if (letters_[i].exp != o.letters_[i].exp)
      return letters_[i].exp < o.letters_[i].exp;
  }
  return false;
}

long Word::net_exponent(const std::string& gen) const {
  long e = 0;
  for (const Letter& l : letters_)
    if (l.gen == gen) e += l.exp;
  return e;
}

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j].gen == letters_[i].gen &&
           letters_[j].exp == letters_[i].exp)
      ++j;
    long run = static_cast<long>(j - i) * letters_[i].exp;
    if (!out.empty()) out += '*';
    out += letters_[i].gen;
    if (run != 1) out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

Word Word::parse(const std::string& text) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  auto skip_ws = [&]() { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  skip_ws();
  if (i < text.size() && text[i] == '1') {
    std::size_t j = i + 1;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j >= text.size()) return Word();
  }
  bool first = true;
  while (i < text.size()) {
    skip_ws();
    if (i >= text.size()) break;
    if (!first) {
      if (text[i] != '*')
        throw std::invalid_argument("Word::parse: expected '*' in '" + text + "'");
      ++i;
      skip_ws();
    }
    first = false;
    if (i >= text.size() || !(std::isalpha(static_cast<unsigned char>(text[i]))))
      throw std::invalid_argument("Word::parse: expected generator name in '" + text + "'");
    std::string name;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      name += text[i++];
    long exp = 1;
    skip_ws();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip_ws();
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw std::invalid_argument("Word::parse: bad exponent in '" + text + "'");
      exp = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        exp = exp * 10 + (text[i++] - '0');
      if (neg) exp = -exp;
    }
    int sign = exp >= 0 ? 1 : -1;
    for (long k = 0; k < (exp >= 0 ? exp : -exp); ++k)
      letters.push_back(Letter{name, sign});
    skip_ws();
  }
  return Word(std::move(letters));
}

void Presentation::validate() const {
  std::set<std::string> gens(generators.begin(), generators.end());
  if (gens.size() != generators.size())
    throw std::invalid_argument("Presentation: duplicate generator names");
  for (const Word& r : relators)
    for (const Letter& l : r.letters())
      if (!gens.count(l.gen))
        throw std::invalid_argument("Presentation: relator uses undeclared generator '" + l.gen + "'");
  if (!images.empty()) {
    Eigen::Index dim = -1;
    for (const std::string& g : generators) {
      auto it = images.find(g);
      if (it == images.end())
        throw std::invalid_argument("Presentation: missing image for '" + g + "'");
      if (dim < 0) dim = it->second.rows();
      if (it->second.rows() != dim || it->second.cols() != dim)
        throw std::invalid_argument("Presentation: image size mismatch for '" + g + "'");
    }
  }
}

RatMat evaluate(const Word& w, const std::map<std::string, RatMat>& images,
                Eigen::Index dim) {
  RatMat acc = rat_identity(dim);
  std::map<std::string, RatMat> inverses;
  for (const Letter& l : w.letters()) {
    auto it = images.find(l.gen);
    if (it == images.end())
      throw std::invalid_argument("evaluate: missing image for '" + l.gen + "'");
    if (l.exp == 1) {
      acc = acc * it->second;
    } else {
      auto cached = inverses.find(l.gen);
      if (cached == inverses.end())
        cached = inverses.emplace(l.gen, rat_inverse(it->second)).first;
      acc = acc * cached->second;
    }
  }
  return acc;
}

AbelianInvariants abelian_invariants(const Presentation& p) {
  const Eigen::Index g = static_cast<Eigen::Index>(p.generators.size());
  const Eigen::Index r = static_cast<Eigen::Index>(p.relators.size());
  IntMat e = IntMat::Zero(std::max<Eigen::Index>(r, 1), g);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < g; ++j)
      e(i, j) = p.relators[i].net_exponent(p.generators[j]);
  SnfResult s = snf(e);
  AbelianInvariants inv;
  Eigen::Index nonzero = 0;
  const Eigen::Index t_max = std::min(s.D.rows(), s.D.cols());
  for (Eigen::Index t = 0; t < t_max; ++t) {
    if (s.D(t, t) == 0) continue;
    ++nonzero;
    if (s.D(t, t) > 1) inv.torsion.push_back(s.D(t, t));
  }
  inv.free_rank = static_cast<long>(g - nonzero);
  return inv;
}

namespace {

// Substitutes every occurrence of `gen` by `rep` (a single letter word
// or empty) in-place.
Word substitute(const Word& w, const std::string& gen, const Word& rep) {
  std::vector<Letter> out;
  for (const Letter& l : w.letters()) {
    if (l.gen != gen) {
      out.push_back(l);
      continue;
    }
    Word piece = l.exp == 1 ? rep : rep.inverse();
    for (const Letter& pl : piece.letters()) out.push_back(pl);
  }
  return Word(std::move(out));
}

} // namespace

Presentation simplify(const Presentation& input) {
  AbelianInvariants before = abelian_invariants(input);
  Presentation p = input;

  bool changed = true;
  while (changed) {
    changed = false;
    // Drop empty relators.
    std::vector<Word> kept;
    for (const Word& r : p.relators)
      if (!r.empty()) kept.push_back(r);
    if (kept.size() != p.relators.size()) changed = true;
    p.relators = std::move(kept);

    // Deduplicate (exact letter sequences).
    std::set<Word> seen;
    std::vector<Word> uniq;
    for (const Word& r : p.relators) {
      if (seen.insert(r).second) uniq.push_back(r);
      else changed = true;
    }
    p.relators = std::move(uniq);

    // A relator of length 1 kills its generator; length 2 over two
    // distinct names defines one in terms of the other.
    for (std::size_t idx = 0; idx < p.relators.size(); ++idx) {
      const Word& r = p.relators[idx];
      std::string victim;
      Word rep;
      if (r.size() == 1) {
        victim = r.letters()[0].gen;
      } else if (r.size() == 2 && r.letters()[0].gen != r.letters()[1].gen) {
        // x^a y^b = 1  =>  x = y^{-ab}
        const Letter& x = r.letters()[0];
        const Letter& y = r.letters()[1];
        victim = x.gen;
        rep = Word::letter(y.gen, -x.exp * y.exp);
      } else {
        continue;
      }
      if (p.has_images()) {
        Eigen::Index dim = p.images.begin()->second.rows();
        RatMat lhs = p.images.at(victim);
        RatMat rhs = evaluate(rep, p.images, dim);
        if (!mat_eq(lhs, rhs))
          throw std::logic_error("simplify: inconsistent images for substitution of '" + victim + "'");
        p.images.erase(victim);
      }
      std::vector<Word> next;
      for (std::size_t k = 0; k < p.relators.size(); ++k) {
        if (k == idx) continue;
        next.push_back(substitute(p.relators[k], victim, rep));
      }
      p.relators = std::move(next);
      p.generators.erase(std::remove(p.generators.begin(), p.generators.end(), victim),
                         p.generators.end());
      changed = true;
      break;
    }
  }

  p.validate();
  AbelianInvariants after = abelian_invariants(p);
  if (!(before == after))
    throw std::logic_error("simplify: abelian invariants changed");
  return p;
}

std::string to_text(const Presentation& p) {
  std::ostringstream out;
  out << "gens:";
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    out << (i ? ", " : " ") << p.generators[i];
  out << "\n";
  for (const Word& r : p.relators) out << r.str() << "\n";
  return out.str();
}

Presentation parse_text(const std::string& text) {
  Presentation p;
  std::istringstream in(text);
  std::string line;
  bool have_gens = false;
  while (std::getline(in, line)) {
    // Trim.
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.empty() || line[0] == '#') continue;
    if (!have_gens) {
      if (line.rfind("gens:", 0) != 0)
        throw std::invalid_argument("parse_text: first line must start with 'gens:'");
      std::string rest = line.substr(5);
      std::string name;
      for (char c : rest + ",") {
        if (c == ',') {
          auto nb = name.find_first_not_of(" \t");
          if (nb != std::string::npos) {
            auto ne = name.find_last_not_of(" \t");
            p.generators.push_back(name.substr(nb, ne - nb + 1));
          }
          name.clear();
        } else {
          name += c;
        }
      }
      have_gens = true;
      continue;
    }
    p.relators.push_back(Word::parse(line));
  }
  if (!have_gens) throw std::invalid_argument("parse_text: missing 'gens:' line");
  p.validate();
  return p;
}

} // namespace sunit
