#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace npiscope::treebank {

/// Half-open token-index interval [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int width() const { return end - start; }
  bool contains(int i) const { return i >= start && i < end; }
  bool operator==(const Span&) const = default;
};

/// Labeled constituency tree. A node is a leaf iff it has no children,
/// which is exactly when `token` is present.
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;
  std::optional<std::string> token;
  Span span;

  bool is_leaf() const { return children.empty(); }
};

enum class LabelClass {
  VerbGroup,
  Modal,
  Adverb,
  NounPhrase,
  PrepPhrase,
  AdjPhrase,
  AdvPhrase,
  Clause,
  Subclause,
  Other,
};

/// Parse one bracketed constituency tree. Leaf spans are assigned in
/// left-to-right order starting at 0; internal spans cover their children.
ParseTree parse_ptb(std::string_view line);

/// Left-to-right leaf tokens.
std::vector<std::string> leaves(const ParseTree& tree);

/// Collapse a raw node label into the coarse class used by pattern
/// matching. Function-tag suffixes ("NP-SBJ", "NP=2") are stripped first.
/// Verb POS tags and VP map to VerbGroup; MD stays separate.
LabelClass normalize_label(std::string_view raw);

/// Serialize back to single-line bracket notation.
std::string to_bracket(const ParseTree& tree);

const char* label_class_name(LabelClass c);

}  // namespace npiscope::treebank
