#include "npiscope/synthcorpus.hpp"

#include <algorithm>
#include <optional>

#include "npiscope/errors.hpp"
#include "npiscope/rng.hpp"
#include "npiscope/treebank.hpp"

namespace npiscope::synthcorpus {

using extraction::LicensedConstruction;
using treebank::ParseTree;
using treebank::Span;

namespace {

enum class ItemKind { Determiner, Pronoun, Adverb };

ItemKind item_kind(const std::string& item) {
  if (item == "any" || item == "some") return ItemKind::Determiner;
  if (item == "anybody" || item == "anyone" || item == "anything" || item == "somebody" ||
      item == "someone" || item == "something")
    return ItemKind::Pronoun;
  return ItemKind::Adverb;  // anymore/anytime/anywhere and their mirrors
}

bool adverb_kind(const std::string& npi) { return item_kind(npi) == ItemKind::Adverb; }

struct Built {
  ParseTree sentence;
  int licensor_index = -1;
  int npi_index = -1;
  Span scope;
};

class Builder {
 public:
  Builder(const GrammarConfig& cfg, SplitMix64& rng) : cfg_(cfg), rng_(rng) {}

  /// `licensor` empty means the positive mirror: the licensor slot is
  /// omitted entirely (removed operators) while "everybody" still fills it.
  Built build(int pattern, const std::string& licensor, const std::string& item, int distance) {
    cursor_ = 0;
    Built out;
    switch (pattern) {
      case 1: out = aux_pattern(licensor, item, distance, "VBD", "did"); break;
      case 2: out = aux_pattern(licensor, item, distance, "MD", "could"); break;
      case 3: out = copula_pattern(licensor, item, distance); break;
      case 4: out = subject_adjunct_pattern(licensor, item, distance); break;
      case 5: out = clause_pattern(licensor, item, distance); break;
      case 6: out = existential_pattern(licensor, item, distance); break;
      default: throw ConfigInvalid("unknown pattern id " + std::to_string(pattern));
    }
    return out;
  }

 private:
  ParseTree leaf(const char* label, std::string token) {
    ParseTree t;
    t.label = label;
    t.token = std::move(token);
    t.span = {cursor_, cursor_ + 1};
    ++cursor_;
    return t;
  }

  static ParseTree node(const char* label, std::vector<ParseTree> children) {
    ParseTree t;
    t.label = label;
    t.span = {children.front().span.start, children.back().span.end};
    t.children = std::move(children);
    return t;
  }

  const std::string& pick(const std::vector<std::string>& pool) {
    return pool[rng_.next_below(pool.size())];
  }

  ParseTree subject_np() {
    std::vector<ParseTree> kids;
    kids.push_back(leaf("DT", "the"));
    if (rng_.next_double() < 0.3) kids.push_back(leaf("JJ", pick(cfg_.adjectives)));
    kids.push_back(leaf("NN", pick(cfg_.subjects)));
    return node("NP", std::move(kids));
  }

  ParseTree licensor_slot(const std::string& licensor, int& lic_pos) {
    lic_pos = cursor_;
    if (licensor == "nobody" || licensor == "everybody") {
      std::vector<ParseTree> kids;
      kids.push_back(leaf("NN", licensor));
      return node("NP", std::move(kids));
    }
    return leaf("RB", licensor);
  }

  ParseTree item_phrase(const std::string& item, int& item_pos) {
    item_pos = cursor_;
    std::vector<ParseTree> kids;
    switch (item_kind(item)) {
      case ItemKind::Determiner:
        kids.push_back(leaf("DT", item));
        kids.push_back(leaf("NN", pick(cfg_.objects)));
        return node("NP", std::move(kids));
      case ItemKind::Pronoun:
        kids.push_back(leaf("NN", item));
        return node("NP", std::move(kids));
      case ItemKind::Adverb:
        kids.push_back(leaf("RB", item));
        return node("ADVP", std::move(kids));
    }
    throw ConfigInvalid("unreachable item kind");
  }

  void push_fillers(std::vector<ParseTree>& kids, int count) {
    for (int i = 0; i < count; ++i) {
      std::vector<ParseTree> adv;
      adv.push_back(leaf("RB", pick(cfg_.adverbs)));
      kids.push_back(node("ADVP", std::move(adv)));
    }
  }

  ParseTree tail_pp() {
    std::vector<ParseTree> np;
    np.push_back(leaf("DT", "the"));
    np.push_back(leaf("NN", pick(cfg_.objects)));
    std::vector<ParseTree> pp;
    pp.push_back(leaf("IN", pick(cfg_.prepositions)));
    pp.push_back(node("NP", std::move(np)));
    return node("PP", std::move(pp));
  }

  ParseTree finish_sentence(std::vector<ParseTree> kids, bool allow_tail = true) {
    if (allow_tail && rng_.next_double() < 0.5) kids.push_back(tail_pp());
    kids.push_back(leaf(".", "."));
    return node("S", std::move(kids));
  }

  // patterns 1 and 2: (VP (VBD|MD aux) RB [VP])
  Built aux_pattern(const std::string& licensor, const std::string& item, int distance,
                    const char* aux_tag, const char* aux) {
    Built out;
    ParseTree subj = subject_np();
    std::vector<ParseTree> main;
    main.push_back(leaf(aux_tag, aux));
    if (!licensor.empty()) main.push_back(licensor_slot(licensor, out.licensor_index));

    std::vector<ParseTree> scope;
    scope.push_back(leaf("VB", pick(cfg_.verbs)));
    push_fillers(scope, distance - 2);
    scope.push_back(item_phrase(item, out.npi_index));
    ParseTree scope_vp = node("VP", std::move(scope));
    out.scope = scope_vp.span;
    main.push_back(std::move(scope_vp));

    std::vector<ParseTree> s;
    s.push_back(std::move(subj));
    s.push_back(node("VP", std::move(main)));
    out.sentence = finish_sentence(std::move(s));
    return out;
  }

  // pattern 3: (VP (VBD was) RB [PP]) for nominal items,
  //            (VP (VBD was) RB [ADJP]) for adverbial ones
  Built copula_pattern(const std::string& licensor, const std::string& item, int distance) {
    Built out;
    ParseTree subj = subject_np();
    std::vector<ParseTree> main;
    main.push_back(leaf("VBD", "was"));
    if (!licensor.empty()) main.push_back(licensor_slot(licensor, out.licensor_index));

    std::vector<ParseTree> scope;
    if (item_kind(item) == ItemKind::Adverb) {
      push_fillers(scope, distance - 2);
      scope.push_back(leaf("JJ", pick(cfg_.adjectives)));
      std::vector<ParseTree> advp;
      advp.push_back(leaf("RB", item));
      out.npi_index = cursor_ - 1;
      advp.back().span = {cursor_ - 1, cursor_};
      scope.push_back(node("ADVP", std::move(advp)));
      ParseTree adjp = node("ADJP", std::move(scope));
      out.scope = adjp.span;
      main.push_back(std::move(adjp));
    } else {
      push_fillers(scope, distance - 2);
      scope.push_back(leaf("IN", pick(cfg_.prepositions)));
      scope.push_back(item_phrase(item, out.npi_index));
      ParseTree pp = node("PP", std::move(scope));
      out.scope = pp.span;
      main.push_back(std::move(pp));
    }

    std::vector<ParseTree> s;
    s.push_back(std::move(subj));
    s.push_back(node("VP", std::move(main)));
    out.sentence = finish_sentence(std::move(s));
    return out;
  }

  // pattern 4: (S (NP ...) RB [VP])
  Built subject_adjunct_pattern(const std::string& licensor, const std::string& item,
                                int distance) {
    Built out;
    std::vector<ParseTree> s;
    s.push_back(subject_np());
    if (!licensor.empty()) s.push_back(licensor_slot(licensor, out.licensor_index));

    std::vector<ParseTree> scope;
    scope.push_back(leaf("VBD", pick(cfg_.verbs)));
    push_fillers(scope, distance - 2);
    scope.push_back(item_phrase(item, out.npi_index));
    ParseTree vp = node("VP", std::move(scope));
    out.scope = vp.span;
    s.push_back(std::move(vp));
    out.sentence = finish_sentence(std::move(s));
    return out;
  }

  // pattern 5: (S (RB [S])) under a copula
  Built clause_pattern(const std::string& licensor, const std::string& item, int distance) {
    Built out;
    ParseTree subj = subject_np();
    std::vector<ParseTree> outer_vp;
    outer_vp.push_back(leaf("VBZ", "is"));

    std::vector<ParseTree> licensed;
    if (!licensor.empty()) licensed.push_back(licensor_slot(licensor, out.licensor_index));

    std::vector<ParseTree> inner_vp;
    if (distance == 2) {
      inner_vp.push_back(leaf("VBG", pick(cfg_.gerunds)));
      inner_vp.push_back(item_phrase(item, out.npi_index));
    } else {
      inner_vp.push_back(leaf("TO", "to"));
      std::vector<ParseTree> verb_vp;
      verb_vp.push_back(leaf("VB", pick(cfg_.verbs)));
      push_fillers(verb_vp, distance - 3);
      verb_vp.push_back(item_phrase(item, out.npi_index));
      inner_vp.push_back(node("VP", std::move(verb_vp)));
    }
    std::vector<ParseTree> inner_s;
    inner_s.push_back(node("VP", std::move(inner_vp)));
    ParseTree scope_s = node("S", std::move(inner_s));
    out.scope = scope_s.span;
    licensed.push_back(std::move(scope_s));

    outer_vp.push_back(node("S", std::move(licensed)));
    std::vector<ParseTree> s;
    s.push_back(std::move(subj));
    s.push_back(node("VP", std::move(outer_vp)));
    out.sentence = finish_sentence(std::move(s));
    return out;
  }

  // pattern 6: (RB [NP ADVP]) for adverbial items,
  //            (RB [ADVP]) with an embedded PP for nominal ones
  Built existential_pattern(const std::string& licensor, const std::string& item,
                            int distance) {
    Built out;
    std::vector<ParseTree> subj;
    subj.push_back(leaf("EX", "there"));
    ParseTree subj_np = node("NP", std::move(subj));

    std::vector<ParseTree> main;
    main.push_back(leaf("VBD", "was"));
    if (!licensor.empty()) main.push_back(licensor_slot(licensor, out.licensor_index));
    const int scope_start = cursor_;

    if (item_kind(item) == ItemKind::Adverb) {
      std::vector<ParseTree> np;
      const int np_tokens = distance - 1;
      if (np_tokens == 1) {
        np.push_back(leaf("NN", pick(cfg_.objects)));
      } else {
        np.push_back(leaf("DT", "a"));
        for (int i = 0; i < np_tokens - 2; ++i) np.push_back(leaf("JJ", pick(cfg_.adjectives)));
        np.push_back(leaf("NN", pick(cfg_.objects)));
      }
      main.push_back(node("NP", std::move(np)));
      std::vector<ParseTree> advp;
      out.npi_index = cursor_;
      advp.push_back(leaf("RB", item));
      main.push_back(node("ADVP", std::move(advp)));
    } else {
      if (distance < 3)
        throw InfeasibleDistance("pattern 6 needs distance >= 3 for nominal items");
      std::vector<ParseTree> advp;
      push_fillers(advp, 0);
      for (int i = 0; i < distance - 3; ++i) advp.push_back(leaf("RB", pick(cfg_.adverbs)));
      advp.push_back(leaf("RB", "close"));
      std::vector<ParseTree> pp;
      pp.push_back(leaf("TO", "to"));
      pp.push_back(item_phrase(item, out.npi_index));
      advp.push_back(node("PP", std::move(pp)));
      main.push_back(node("ADVP", std::move(advp)));
    }
    out.scope = {scope_start, cursor_};

    std::vector<ParseTree> s;
    s.push_back(std::move(subj_np));
    s.push_back(node("VP", std::move(main)));
    out.sentence = finish_sentence(std::move(s));
    return out;
  }

  const GrammarConfig& cfg_;
  SplitMix64& rng_;
  int cursor_ = 0;
};

template <typename K>
K pick_weighted_key(SplitMix64& rng, const std::map<K, double>& weights) {
  std::vector<double> w;
  w.reserve(weights.size());
  for (const auto& [k, v] : weights) w.push_back(v);
  std::size_t idx = rng.pick_weighted(w);
  auto it = weights.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(idx));
  return it->first;
}

std::vector<std::string> feasible_npis(const GrammarConfig& cfg, int pattern, int distance) {
  std::vector<std::string> out;
  for (const auto& [npi, w] : cfg.npi_weights) {
    if (w <= 0.0) continue;
    if (pattern == 6 && distance == 2 && !adverb_kind(npi)) continue;
    out.push_back(npi);
  }
  return out;
}

std::string positive_item(const GrammarConfig& cfg, const std::string& npi, SplitMix64& rng) {
  const auto& lex = extraction::default_lexicon();
  auto it = lex.ppi_map.find(npi);
  if (it != lex.ppi_map.end()) return it->second;
  // "anymore" has no PPI counterpart; mirror it with a plain adverb
  return cfg.adverbs[rng.next_below(cfg.adverbs.size())];
}

}  // namespace

GrammarConfig GrammarConfig::desk_default() {
  GrammarConfig cfg;
  cfg.subjects = {"boy", "girl", "farmer", "teacher", "doctor",
                  "sailor", "painter", "child", "neighbor", "friend"};
  cfg.verbs = {"find", "buy", "see", "hear", "take", "bring", "carry", "move", "sell", "keep"};
  cfg.gerunds = {"finding", "buying", "seeing", "hearing", "taking",
                 "bringing", "carrying", "moving", "selling", "keeping"};
  cfg.objects = {"marble", "apple", "book", "lamp", "coin", "ribbon",
                 "basket", "bottle", "stone", "letter", "box", "garden"};
  cfg.adverbs = {"quickly", "quietly", "easily", "really", "nearly", "still", "somehow", "often"};
  cfg.adjectives = {"small", "bright", "old", "strange", "useful", "happy"};
  cfg.prepositions = {"in", "of", "near", "with"};
  cfg.licensor_weights = {{"not", 0.35}, {"n't", 0.35}, {"never", 0.2}, {"nobody", 0.1}};
  cfg.npi_weights = {{"any", 0.3},     {"anything", 0.2}, {"anybody", 0.1}, {"anyone", 0.1},
                     {"anymore", 0.1}, {"anytime", 0.1},  {"anywhere", 0.1}};
  cfg.pattern_weights = {{1, 0.4}, {2, 0.15}, {3, 0.15}, {4, 0.1}, {5, 0.1}, {6, 0.1}};
  cfg.distance_weights = {{2, 0.472}, {3, 0.2}, {4, 0.14}, {5, 0.1}, {6, 0.088}};
  cfg.negative_fraction = 0.5;
  cfg.seed = 1;
  return cfg;
}

void GrammarConfig::validate() const {
  auto check_pool = [](const std::vector<std::string>& pool, const char* name) {
    if (pool.empty()) throw ConfigInvalid(std::string("empty vocabulary pool: ") + name);
  };
  check_pool(subjects, "subjects");
  check_pool(verbs, "verbs");
  check_pool(gerunds, "gerunds");
  check_pool(objects, "objects");
  check_pool(adverbs, "adverbs");
  check_pool(adjectives, "adjectives");
  check_pool(prepositions, "prepositions");

  const auto& lex = extraction::default_lexicon();
  auto reserved = [&](const std::string& t) {
    std::string low = extraction::ascii_lower(t);
    if (lex.npi_variants.contains(low) || lex.licensors.contains(low) || low == "everybody")
      return true;
    for (const auto& [npi, ppi] : lex.ppi_map)
      if (low == ppi) return true;
    return false;
  };
  for (const auto* pool : {&subjects, &verbs, &gerunds, &objects, &adverbs, &adjectives,
                           &prepositions}) {
    for (const auto& t : *pool)
      if (reserved(t)) throw ConfigInvalid("pool word collides with the lexicon: " + t);
  }

  auto check_weights = [](const auto& weights, const char* name) {
    if (weights.empty()) throw ConfigInvalid(std::string("empty weight family: ") + name);
    double total = 0.0;
    for (const auto& [k, v] : weights) {
      if (v < 0.0) throw ConfigInvalid(std::string("negative weight in ") + name);
      total += v;
    }
    if (total <= 0.0) throw ConfigInvalid(std::string("weights sum to zero: ") + name);
  };
  check_weights(licensor_weights, "licensors");
  check_weights(npi_weights, "npis");
  check_weights(pattern_weights, "patterns");
  check_weights(distance_weights, "distances");

  for (const auto& [lic, w] : licensor_weights)
    if (w > 0.0 && !lex.licensors.contains(lic))
      throw ConfigInvalid("unknown licensor: " + lic);
  for (const auto& [npi, w] : npi_weights)
    if (w > 0.0 && !lex.npi_variants.contains(npi)) throw ConfigInvalid("unknown NPI: " + npi);
  for (const auto& [p, w] : pattern_weights)
    if (w > 0.0 && (p < 1 || p > 6)) throw ConfigInvalid("pattern id outside 1..6");
  for (const auto& [d, w] : distance_weights) {
    if (w <= 0.0) continue;
    if (d < kMinDistance || d > kMaxDistance)
      throw InfeasibleDistance("distance " + std::to_string(d) +
                               " not realizable by any template");
  }

  bool has_adverb_npi = false;
  for (const auto& [npi, w] : npi_weights)
    if (w > 0.0 && adverb_kind(npi)) has_adverb_npi = true;
  const bool wants_p6_d2 = pattern_weights.contains(6) && pattern_weights.at(6) > 0.0 &&
                           distance_weights.contains(2) && distance_weights.at(2) > 0.0;
  if (wants_p6_d2 && !has_adverb_npi)
    throw InfeasibleDistance("pattern 6 at distance 2 requires an adverbial NPI");

  if (negative_fraction < 0.0 || negative_fraction > 1.0)
    throw ConfigInvalid("negative_fraction outside [0, 1]");
}

GeneratedCorpus generate_corpus(const GrammarConfig& cfg, int n) {
  if (n <= 0) throw ConfigInvalid("corpus size must be positive");
  cfg.validate();

  SplitMix64 rng(cfg.seed);
  Builder builder(cfg, rng);
  GeneratedCorpus out;
  out.parse_lines.reserve(static_cast<std::size_t>(n));

  for (int id = 0; id < n; ++id) {
    const bool negative = rng.next_double() < cfg.negative_fraction;
    const std::string licensor = pick_weighted_key(rng, cfg.licensor_weights);
    const int pattern = pick_weighted_key(rng, cfg.pattern_weights);
    const int distance = pick_weighted_key(rng, cfg.distance_weights);

    const std::vector<std::string> npis = feasible_npis(cfg, pattern, distance);
    std::vector<double> w;
    w.reserve(npis.size());
    for (const auto& npi : npis) w.push_back(cfg.npi_weights.at(npi));
    const std::string npi = npis[rng.pick_weighted(w)];

    if (negative) {
      Built b = builder.build(pattern, licensor, npi, distance);
      LicensedConstruction gold;
      gold.sentence_id = id;
      gold.tokens = treebank::leaves(b.sentence);
      gold.licensor_index = b.licensor_index;
      gold.npi_index = b.npi_index;
      gold.scope = b.scope;
      gold.pattern_id = pattern;
      gold.distance = distance;
      out.gold.push_back(std::move(gold));
      out.parse_lines.push_back(treebank::to_bracket(b.sentence));
    } else {
      const std::string item = positive_item(cfg, npi, rng);
      const std::string slot = licensor == "nobody" ? "everybody" : "";
      Built b = builder.build(pattern, slot, item, distance);
      out.parse_lines.push_back(treebank::to_bracket(b.sentence));
    }
  }
  return out;
}

}  // namespace npiscope::synthcorpus
