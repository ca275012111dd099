#include "npiscope/treebank.hpp"

#include <cctype>
#include <unordered_map>

#include "npiscope/errors.hpp"

namespace npiscope::treebank {

namespace {

bool is_delim(char c) {
  return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParseTree run() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '(') throw UnbalancedBrackets(pos_);
    ParseTree root = node();
    skip_ws();
    if (pos_ < text_.size()) throw TrailingContent(pos_);
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string word() {
    std::size_t begin = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    return std::string(text_.substr(begin, pos_ - begin));
  }

  // Called with text_[pos_] == '('. Consumes through the matching ')'.
  ParseTree node() {
    std::size_t open = pos_;
    ++pos_;  // '('
    skip_ws();
    ParseTree out;
    out.label = word();
    std::vector<std::string> bare;
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size()) throw UnbalancedBrackets(open);
      char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        out.children.push_back(node());
      } else {
        bare.push_back(word());
      }
    }
    if (out.children.empty()) {
      if (bare.empty()) throw EmptyNode(open);
      if (bare.size() > 1)
        throw DataError("node with multiple bare tokens at position " + std::to_string(open));
      out.token = bare.front();
      out.span = {leaf_count_, leaf_count_ + 1};
      ++leaf_count_;
    } else {
      if (!bare.empty())
        throw DataError("node mixes tokens and subtrees at position " + std::to_string(open));
      out.span = {out.children.front().span.start, out.children.back().span.end};
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int leaf_count_ = 0;
};

void collect_leaves(const ParseTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(*t.token);
    return;
  }
  for (const auto& c : t.children) collect_leaves(c, out);
}

std::string_view strip_function_tags(std::string_view raw) {
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] == '-' || raw[i] == '=') return raw.substr(0, i);
  }
  return raw;
}

}  // namespace

ParseTree parse_ptb(std::string_view line) { return Parser(line).run(); }

std::vector<std::string> leaves(const ParseTree& tree) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(tree.span.width()));
  collect_leaves(tree, out);
  return out;
}

LabelClass normalize_label(std::string_view raw) {
  static const std::unordered_map<std::string_view, LabelClass> table = {
      {"VB", LabelClass::VerbGroup},   {"VBD", LabelClass::VerbGroup},
      {"VBZ", LabelClass::VerbGroup},  {"VBP", LabelClass::VerbGroup},
      {"VBN", LabelClass::VerbGroup},  {"VBG", LabelClass::VerbGroup},
      {"VP", LabelClass::VerbGroup},   {"MD", LabelClass::Modal},
      {"RB", LabelClass::Adverb},      {"RBR", LabelClass::Adverb},
      {"RBS", LabelClass::Adverb},     {"NP", LabelClass::NounPhrase},
      {"PP", LabelClass::PrepPhrase},  {"ADJP", LabelClass::AdjPhrase},
      {"ADVP", LabelClass::AdvPhrase}, {"S", LabelClass::Clause},
      {"SBAR", LabelClass::Subclause},
  };
  auto it = table.find(strip_function_tags(raw));
  return it == table.end() ? LabelClass::Other : it->second;
}

std::string to_bracket(const ParseTree& tree) {
  std::string out = "(" + tree.label;
  if (tree.is_leaf()) {
    out += " " + *tree.token;
  } else {
    for (const auto& c : tree.children) out += " " + to_bracket(c);
  }
  out += ")";
  return out;
}

const char* label_class_name(LabelClass c) {
  switch (c) {
    case LabelClass::VerbGroup: return "VERB_GROUP";
    case LabelClass::Modal: return "MODAL";
    case LabelClass::Adverb: return "ADVERB";
    case LabelClass::NounPhrase: return "NOUN_PHRASE";
    case LabelClass::PrepPhrase: return "PREP_PHRASE";
    case LabelClass::AdjPhrase: return "ADJ_PHRASE";
    case LabelClass::AdvPhrase: return "ADV_PHRASE";
    case LabelClass::Clause: return "CLAUSE";
    case LabelClass::Subclause: return "SUBCLAUSE";
    case LabelClass::Other: return "OTHER";
  }
  return "OTHER";
}

}  // namespace npiscope::treebank
