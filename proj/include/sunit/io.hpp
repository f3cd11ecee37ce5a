#pragma once

#include "sunit/engine.hpp"
#include "sunit/quaternion.hpp"

#include <optional>

namespace sunit {

/// JSON presentation document; exact rationals as strings ("num/den"),
/// quaternion generators as 4-tuples in the 1,i,j,k basis.
std::string presentation_to_json(const GroupLevel& level, const QuatOrder* order);

/// Line-delimited JSON: one entry per relator with its provenance tag.
std::string provenance_jsonl(const GroupLevel& level);

/// A presentation loaded back from JSON: enough structure for verify,
/// abelianize, probe and lowindex (the rewriter is rebuilt from the
/// configuration when needed).
struct LoadedPresentation {
  GroupLevel::Kind kind = GroupLevel::Kind::matrix;
  int n = 0;
  std::vector<long> primes;
  Presentation pres;
  std::vector<std::string> center_words;
  std::optional<QuatOrder> order;

  /// Shallow level view (no rewriter); sufficient for the congruence lab.
  GroupLevel as_level() const;
};

LoadedPresentation load_presentation_json(const std::string& text);

} // namespace sunit
