#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "npiscope/treebank.hpp"

namespace npiscope::extraction {

std::string ascii_lower(std::string_view s);

/// How a licensor is neutralized when building the positive conditions.
enum class LicensorRewrite { Remove, Substitute };

/// Lexical inventory for construction matching: the any-variants, the
/// negative operators that license them, and the rewrite maps both sides
/// use. All membership tests are case-insensitive.
struct Lexicon {
  std::unordered_set<std::string> npi_variants;
  std::unordered_set<std::string> licensors;
  std::unordered_map<std::string, std::string> ppi_map;
  std::unordered_map<std::string, std::pair<LicensorRewrite, std::string>> licensor_rewrites;

  bool is_npi(std::string_view token) const;
  bool is_licensor(std::string_view token) const;
};

const Lexicon& default_lexicon();

/// One licensor-NPI pair found in a sentence, with the licensing scope
/// span and the id of the subtree pattern that produced it.
struct LicensedConstruction {
  int sentence_id = 0;
  std::vector<std::string> tokens;
  int licensor_index = 0;
  int npi_index = 0;
  treebank::Span scope;
  int pattern_id = 0;
  int distance = 0;

  bool operator==(const LicensedConstruction&) const = default;
};

enum class ScopeLabel : int {
  Pre = 1,
  Licensor = 2,
  InScope = 3,
  Npi = 4,
  Post = 5,
};

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<ScopeLabel> labels;
};

/// Cheap surface check: at least one NPI variant and one licensor present.
bool surface_prefilter(std::span<const std::string> tokens, const Lexicon& lex);

/// Match the six licensing subtree patterns against a parse. Emits one
/// record per NPI occurrence; when several candidate scopes contain the
/// same NPI only the innermost (smallest) scope is kept.
std::vector<LicensedConstruction> match_patterns(const treebank::ParseTree& tree,
                                                 const Lexicon& lex,
                                                 int sentence_id = 0);

/// 5-class annotation of a sentence from one construction.
LabeledSentence label_tokens(std::vector<std::string> tokens,
                             const LicensedConstruction& c, const Lexicon& lex);

std::map<int, std::int64_t> distance_histogram(std::span<const LicensedConstruction> cs);

}  // namespace npiscope::extraction
