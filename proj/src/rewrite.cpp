#include "npiscope/rewrite.hpp"

#include <cctype>

#include "npiscope/errors.hpp"

namespace npiscope::rewrite {

using extraction::ascii_lower;
using extraction::Lexicon;
using extraction::LicensedConstruction;
using extraction::LicensorRewrite;

namespace {

std::string match_case(std::string replacement, const std::string& original) {
  if (!original.empty() && !replacement.empty() &&
      std::isupper(static_cast<unsigned char>(original.front())))
    replacement.front() =
        static_cast<char>(std::toupper(static_cast<unsigned char>(replacement.front())));
  return replacement;
}

}  // namespace

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::NpiNeg: return "NPI_neg";
    case Condition::NpiPos: return "NPI_pos";
    case Condition::PpiNeg: return "PPI_neg";
    case Condition::PpiPos: return "PPI_pos";
  }
  return "?";
}

RemovalResult remove_licensor(std::vector<std::string> tokens, int licensor_index,
                              const Lexicon& lex) {
  if (licensor_index < 0 || licensor_index >= static_cast<int>(tokens.size()))
    throw NotALicensor("licensor index out of range");
  const std::string original = tokens[static_cast<std::size_t>(licensor_index)];
  auto it = lex.licensor_rewrites.find(ascii_lower(original));
  if (it == lex.licensor_rewrites.end())
    throw NotALicensor("'" + original + "' is not a licensor");

  RemovalResult out;
  if (it->second.first == LicensorRewrite::Remove) {
    tokens.erase(tokens.begin() + licensor_index);
    out.index_shift = -1;
  } else {
    tokens[static_cast<std::size_t>(licensor_index)] = match_case(it->second.second, original);
    out.index_shift = 0;
  }
  out.tokens = std::move(tokens);
  return out;
}

std::vector<std::string> swap_to_ppi(std::vector<std::string> tokens, int npi_index,
                                     const Lexicon& lex) {
  if (npi_index < 0 || npi_index >= static_cast<int>(tokens.size()))
    throw IndexOutOfRange("NPI index out of range");
  const std::string original = tokens[static_cast<std::size_t>(npi_index)];
  auto it = lex.ppi_map.find(ascii_lower(original));
  if (it == lex.ppi_map.end())
    throw NoPpiCounterpart("'" + original + "' has no PPI counterpart");
  tokens[static_cast<std::size_t>(npi_index)] = match_case(it->second, original);
  return tokens;
}

RewriteSet build_rewrite_set(const LicensedConstruction& c, const Lexicon& lex) {
  const bool has_ppi = lex.ppi_map.contains(ascii_lower(c.tokens[static_cast<std::size_t>(c.npi_index)]));

  RewriteSet set;
  set.source = c;

  auto& npi_neg = set.variants[0];
  npi_neg = {Condition::NpiNeg, c.tokens, c.npi_index, true};

  RemovalResult removed = remove_licensor(c.tokens, c.licensor_index, lex);
  auto& npi_pos = set.variants[1];
  npi_pos = {Condition::NpiPos, removed.tokens, c.npi_index + removed.index_shift, true};

  auto& ppi_neg = set.variants[2];
  auto& ppi_pos = set.variants[3];
  if (has_ppi) {
    ppi_neg = {Condition::PpiNeg, swap_to_ppi(c.tokens, c.npi_index, lex), c.npi_index, true};
    ppi_pos = {Condition::PpiPos, swap_to_ppi(removed.tokens, npi_pos.item_index, lex),
               npi_pos.item_index, true};
  } else {
    ppi_neg = {Condition::PpiNeg, npi_neg.tokens, npi_neg.item_index, false};
    ppi_pos = {Condition::PpiPos, npi_pos.tokens, npi_pos.item_index, false};
  }
  return set;
}

}  // namespace npiscope::rewrite
