#include "npiscope/extraction.hpp"

#include <algorithm>
#include <cctype>

#include "npiscope/errors.hpp"

namespace npiscope::extraction {

using treebank::LabelClass;
using treebank::ParseTree;
using treebank::Span;

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool Lexicon::is_npi(std::string_view token) const {
  return npi_variants.contains(ascii_lower(token));
}

bool Lexicon::is_licensor(std::string_view token) const {
  return licensors.contains(ascii_lower(token));
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = [] {
    Lexicon l;
    l.npi_variants = {"any", "anybody", "anyone", "anymore", "anything", "anytime", "anywhere"};
    l.licensors = {"not", "n't", "never", "nobody"};
    l.ppi_map = {{"any", "some"},           {"anybody", "somebody"},
                 {"anyone", "someone"},     {"anything", "something"},
                 {"anytime", "sometime"},   {"anywhere", "somewhere"}};
    l.licensor_rewrites = {{"not", {LicensorRewrite::Remove, ""}},
                           {"n't", {LicensorRewrite::Remove, ""}},
                           {"never", {LicensorRewrite::Remove, ""}},
                           {"nobody", {LicensorRewrite::Substitute, "everybody"}}};
    return l;
  }();
  return lex;
}

bool surface_prefilter(std::span<const std::string> tokens, const Lexicon& lex) {
  bool npi = false, licensor = false;
  for (const auto& t : tokens) {
    std::string low = ascii_lower(t);
    npi = npi || lex.npi_variants.contains(low);
    licensor = licensor || lex.licensors.contains(low);
    if (npi && licensor) return true;
  }
  return false;
}

namespace {

struct Candidate {
  int licensor_index;
  int npi_index;
  Span scope;
  int pattern_id;
};

// A child fills the licensor slot when it dominates exactly one token and
// that token is in the lexicon; the node label is not consulted, so
// nominal licensors like "nobody" qualify wherever the surrounding shape
// matches.
const std::string* licensor_leaf(const ParseTree& child, const Lexicon& lex) {
  if (child.span.width() != 1) return nullptr;
  const ParseTree* n = &child;
  while (!n->is_leaf()) n = &n->children.front();
  return lex.is_licensor(*n->token) ? &*n->token : nullptr;
}

void collect_npi_positions(const ParseTree& t, const Lexicon& lex, std::vector<int>& out) {
  if (t.is_leaf()) {
    if (lex.is_npi(*t.token)) out.push_back(t.span.start);
    return;
  }
  for (const auto& c : t.children) collect_npi_positions(c, lex, out);
}

bool scope_class_in(LabelClass c, std::initializer_list<LabelClass> set) {
  return std::find(set.begin(), set.end(), c) != set.end();
}

void match_node(const ParseTree& node, const Lexicon& lex,
                const std::vector<int>& npi_positions, std::vector<Candidate>& out) {
  if (node.is_leaf()) return;
  const LabelClass parent = treebank::normalize_label(node.label);
  const auto& ch = node.children;

  auto emit = [&](int lic_pos, Span scope, int pattern) {
    for (int npi : npi_positions) {
      if (scope.contains(npi) && npi > lic_pos) out.push_back({lic_pos, npi, scope, pattern});
    }
  };

  for (std::size_t j = 0; j < ch.size(); ++j) {
    if (!licensor_leaf(ch[j], lex)) continue;
    const int lic_pos = ch[j].span.start;

    // patterns 1-4: [left, licensor, scope] triples
    if (j >= 1 && j + 1 < ch.size()) {
      const LabelClass left = treebank::normalize_label(ch[j - 1].label);
      const LabelClass right = treebank::normalize_label(ch[j + 1].label);
      const Span scope = ch[j + 1].span;
      if (parent == LabelClass::VerbGroup) {
        if (left == LabelClass::VerbGroup && right == LabelClass::VerbGroup)
          emit(lic_pos, scope, 1);
        if (left == LabelClass::Modal && right == LabelClass::VerbGroup)
          emit(lic_pos, scope, 2);
        if (left == LabelClass::VerbGroup &&
            scope_class_in(right, {LabelClass::NounPhrase, LabelClass::PrepPhrase,
                                   LabelClass::AdjPhrase}))
          emit(lic_pos, scope, 3);
      }
      if ((parent == LabelClass::VerbGroup || parent == LabelClass::Clause) &&
          left == LabelClass::NounPhrase && right == LabelClass::VerbGroup)
        emit(lic_pos, scope, 4);
    }

    // pattern 5: clause-level [licensor, S/SBAR]
    if (parent == LabelClass::Clause && j + 1 < ch.size()) {
      const LabelClass right = treebank::normalize_label(ch[j + 1].label);
      if (scope_class_in(right, {LabelClass::Clause, LabelClass::Subclause}))
        emit(lic_pos, ch[j + 1].span, 5);
    }

    // pattern 6: [licensor, optional NP/PP, ADVP]; scope runs from the
    // constituent after the licensor through the ADVP
    if (j + 1 < ch.size()) {
      const LabelClass c1 = treebank::normalize_label(ch[j + 1].label);
      if (c1 == LabelClass::AdvPhrase) {
        emit(lic_pos, ch[j + 1].span, 6);
      } else if (scope_class_in(c1, {LabelClass::NounPhrase, LabelClass::PrepPhrase}) &&
                 j + 2 < ch.size() &&
                 treebank::normalize_label(ch[j + 2].label) == LabelClass::AdvPhrase) {
        emit(lic_pos, Span{ch[j + 1].span.start, ch[j + 2].span.end}, 6);
      }
    }
  }

  for (const auto& c : ch) match_node(c, lex, npi_positions, out);
}

}  // namespace

std::vector<LicensedConstruction> match_patterns(const ParseTree& tree, const Lexicon& lex,
                                                 int sentence_id) {
  std::vector<int> npi_positions;
  collect_npi_positions(tree, lex, npi_positions);
  if (npi_positions.empty()) return {};

  std::vector<Candidate> candidates;
  match_node(tree, lex, npi_positions, candidates);
  if (candidates.empty()) return {};

  // one record per NPI occurrence: keep the innermost scope
  std::map<int, Candidate> best;
  for (const auto& c : candidates) {
    auto it = best.find(c.npi_index);
    if (it == best.end()) {
      best.emplace(c.npi_index, c);
      continue;
    }
    const Candidate& b = it->second;
    if (std::tuple(c.scope.width(), -c.scope.start, c.pattern_id) <
        std::tuple(b.scope.width(), -b.scope.start, b.pattern_id))
      it->second = c;
  }

  std::vector<std::string> tokens = treebank::leaves(tree);
  std::vector<LicensedConstruction> out;
  out.reserve(best.size());
  for (const auto& [npi, c] : best) {
    LicensedConstruction lc;
    lc.sentence_id = sentence_id;
    lc.tokens = tokens;
    lc.licensor_index = c.licensor_index;
    lc.npi_index = c.npi_index;
    lc.scope = c.scope;
    lc.pattern_id = c.pattern_id;
    lc.distance = c.npi_index - c.licensor_index;
    out.push_back(std::move(lc));
  }
  return out;
}

LabeledSentence label_tokens(std::vector<std::string> tokens, const LicensedConstruction& c,
                             const Lexicon& lex) {
  const int n = static_cast<int>(tokens.size());
  if (c.licensor_index < 0 || c.licensor_index >= n || c.npi_index < 0 || c.npi_index >= n ||
      c.scope.start < 0 || c.scope.end > n || c.scope.start > c.scope.end ||
      !c.scope.contains(c.npi_index) || c.licensor_index >= c.scope.start)
    throw IndexOutOfRange("construction inconsistent with token sequence");

  LabeledSentence out;
  out.labels.assign(static_cast<std::size_t>(n), ScopeLabel::Pre);
  for (int i = 0; i < n; ++i) {
    if (i < c.licensor_index) {
      out.labels[i] = ScopeLabel::Pre;
    } else if (i == c.licensor_index) {
      out.labels[i] = ScopeLabel::Licensor;
    } else if (c.scope.contains(i)) {
      out.labels[i] = lex.is_npi(tokens[i]) ? ScopeLabel::Npi : ScopeLabel::InScope;
    } else if (i >= c.scope.end) {
      out.labels[i] = ScopeLabel::Post;
    } else {
      // between licensor and scope start; cannot occur for the six
      // patterns, where the scope opens directly after the licensor
      out.labels[i] = ScopeLabel::InScope;
    }
  }
  out.tokens = std::move(tokens);
  return out;
}

std::map<int, std::int64_t> distance_histogram(std::span<const LicensedConstruction> cs) {
  std::map<int, std::int64_t> hist;
  for (const auto& c : cs) ++hist[c.distance];
  return hist;
}

}  // namespace npiscope::extraction
