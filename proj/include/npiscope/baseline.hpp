#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace npiscope::baseline {

/// Static word vectors; tokens missing from the table map to `fallback`
/// (the zero vector for loaded tables).
struct EmbeddingTable {
  std::unordered_map<std::string, Eigen::VectorXd> vectors;
  int dim = 0;
  Eigen::VectorXd fallback;

  const Eigen::VectorXd& lookup(const std::string& token) const;
};

/// Text format: one line per token, "token v1 v2 ... vd". The dimension
/// is inferred from the first line and enforced afterwards.
EmbeddingTable load_embedding_table(const std::string& path);

/// Seeded uniform table for desk-scale runs without pretrained vectors.
EmbeddingTable random_table(std::span<const std::string> tokens, int dim, std::uint64_t seed);

/// Position i carries the arithmetic mean of the embeddings of tokens
/// 0..i; with `word_only` each position carries its own embedding.
std::vector<Eigen::VectorXd> additive_prefix_repr(std::span<const std::string> tokens,
                                                  const EmbeddingTable& table,
                                                  bool word_only = false);

}  // namespace npiscope::baseline
