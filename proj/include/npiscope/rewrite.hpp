#pragma once

#include <array>
#include <string>
#include <vector>

#include "npiscope/extraction.hpp"

namespace npiscope::rewrite {

enum class Condition : int {
  NpiNeg = 0,  // original sentence
  NpiPos = 1,  // licensor removed / neutralized
  PpiNeg = 2,  // NPI swapped for its PPI counterpart
  PpiPos = 3,  // both rewrites
};

const char* condition_name(Condition c);

struct ConditionVariant {
  Condition condition = Condition::NpiNeg;
  std::vector<std::string> tokens;
  int item_index = 0;  // position of the NPI/PPI after rewriting
  bool valid = true;
};

struct RewriteSet {
  extraction::LicensedConstruction source;
  std::array<ConditionVariant, 4> variants;

  const ConditionVariant& variant(Condition c) const {
    return variants[static_cast<int>(c)];
  }
};

struct RemovalResult {
  std::vector<std::string> tokens;
  int index_shift = 0;  // applies to positions after the licensor
};

/// Neutralize the licensor: "not"/"n't"/"never" are deleted, "nobody"
/// becomes "everybody" in place. Replacements copy the capitalization of
/// the replaced token's first letter.
RemovalResult remove_licensor(std::vector<std::string> tokens, int licensor_index,
                              const extraction::Lexicon& lex);

/// Replace the NPI by its PPI counterpart ("anything" -> "something").
/// Throws NoPpiCounterpart for "anymore".
std::vector<std::string> swap_to_ppi(std::vector<std::string> tokens, int npi_index,
                                     const extraction::Lexicon& lex);

/// The four experimental conditions for one construction. PPI variants
/// are marked invalid when the NPI has no PPI counterpart.
RewriteSet build_rewrite_set(const extraction::LicensedConstruction& c,
                             const extraction::Lexicon& lex);

}  // namespace npiscope::rewrite
