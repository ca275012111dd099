#include "npiscope/baseline.hpp"

#include <fstream>
#include <sstream>

#include "npiscope/errors.hpp"
#include "npiscope/rng.hpp"

namespace npiscope::baseline {

const Eigen::VectorXd& EmbeddingTable::lookup(const std::string& token) const {
  auto it = vectors.find(token);
  return it == vectors.end() ? fallback : it->second;
}

EmbeddingTable load_embedding_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path);

  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<double> values;
    double v;
    while (ls >> v) values.push_back(v);
    if (values.empty())
      throw DimensionMismatch("no vector values on line " + std::to_string(lineno), lineno);
    if (table.dim == 0) {
      table.dim = static_cast<int>(values.size());
    } else if (static_cast<int>(values.size()) != table.dim) {
      throw DimensionMismatch("expected " + std::to_string(table.dim) + " values, got " +
                                  std::to_string(values.size()) + " on line " +
                                  std::to_string(lineno),
                              lineno);
    }
    table.vectors[token] =
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  if (table.vectors.empty()) throw EmptyFile("embedding file has no entries: " + path);
  table.fallback = Eigen::VectorXd::Zero(table.dim);
  return table;
}

EmbeddingTable random_table(std::span<const std::string> tokens, int dim, std::uint64_t seed) {
  if (dim <= 0) throw DimensionMismatch("embedding dimension must be positive");
  EmbeddingTable table;
  table.dim = dim;
  table.fallback = Eigen::VectorXd::Zero(dim);
  SplitMix64 rng(seed);
  for (const auto& t : tokens) {
    if (table.vectors.contains(t)) continue;
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.next_double() - 0.5;
    table.vectors[t] = std::move(v);
  }
  return table;
}

std::vector<Eigen::VectorXd> additive_prefix_repr(std::span<const std::string> tokens,
                                                  const EmbeddingTable& table, bool word_only) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(tokens.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Eigen::VectorXd& e = table.lookup(tokens[i]);
    if (word_only) {
      out.push_back(e);
    } else {
      sum += e;
      out.push_back(sum / static_cast<double>(i + 1));
    }
  }
  return out;
}

}  // namespace npiscope::baseline
