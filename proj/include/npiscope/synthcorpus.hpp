#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "npiscope/extraction.hpp"

namespace npiscope::synthcorpus {

/// Weighted grammar over the six licensing subtree shapes. Negative
/// sentences embed exactly one licensor-NPI pair; positive sentences are
/// the licensor-free mirrors carrying PPI counterparts, so polarity items
/// never leak outside licensed scopes.
struct GrammarConfig {
  std::vector<std::string> subjects;
  std::vector<std::string> verbs;
  std::vector<std::string> gerunds;
  std::vector<std::string> objects;
  std::vector<std::string> adverbs;
  std::vector<std::string> adjectives;
  std::vector<std::string> prepositions;

  std::map<std::string, double> licensor_weights;
  std::map<std::string, double> npi_weights;
  std::map<int, double> pattern_weights;   // pattern ids 1..6
  std::map<int, double> distance_weights;  // NPI minus licensor position

  double negative_fraction = 0.5;
  std::uint64_t seed = 1;

  static GrammarConfig desk_default();
  void validate() const;
};

/// Smallest and largest licensor-NPI distance the templates realize.
inline constexpr int kMinDistance = 2;
inline constexpr int kMaxDistance = 12;

struct GeneratedCorpus {
  std::vector<std::string> parse_lines;
  std::vector<extraction::LicensedConstruction> gold;  // negatives only
};

GeneratedCorpus generate_corpus(const GrammarConfig& cfg, int n);

}  // namespace npiscope::synthcorpus
