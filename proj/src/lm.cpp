#include "npiscope/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "npiscope/errors.hpp"
#include "npiscope/rng.hpp"

namespace npiscope::lm {

int Vocabulary::id_or_unk(const std::string& token) const {
  auto it = ids.find(token);
  return it == ids.end() ? unk_id : it->second;
}

std::vector<int> Vocabulary::encode(std::span<const std::string> sentence) const {
  std::vector<int> out;
  out.reserve(sentence.size());
  for (const auto& t : sentence) out.push_back(id_or_unk(t));
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty()) throw EmptyCorpus();
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& sent : corpus)
    for (const auto& t : sent) ++counts[t];

  std::vector<std::pair<std::string, std::int64_t>> ordered(counts.begin(), counts.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  Vocabulary v;
  v.tokens = {kUnkToken, kEosToken};
  for (auto& [tok, cnt] : ordered)
    if (tok != kUnkToken && tok != kEosToken) v.tokens.push_back(tok);
  v.counts.assign(v.tokens.size(), 0);
  for (int i = 0; i < v.size(); ++i) {
    v.ids[v.tokens[static_cast<std::size_t>(i)]] = i;
    auto it = counts.find(v.tokens[static_cast<std::size_t>(i)]);
    if (it != counts.end()) v.counts[static_cast<std::size_t>(i)] = it->second;
  }
  v.unk_id = 0;
  v.eos_id = 1;
  return v;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens = std::move(tokens);
  v.counts.assign(v.tokens.size(), 0);
  v.unk_id = v.eos_id = -1;
  for (int i = 0; i < v.size(); ++i) {
    const std::string& t = v.tokens[static_cast<std::size_t>(i)];
    v.ids[t] = i;
    if (t == kUnkToken) v.unk_id = i;
    if (t == kEosToken) v.eos_id = i;
  }
  if (v.unk_id < 0 || v.eos_id < 0)
    throw BadCheckpoint("vocabulary lacks <unk> or <eos>");
  return v;
}

bool LstmWeights::all_finite() const {
  auto ok = [](const Eigen::MatrixXd& m) { return m.allFinite(); };
  if (!ok(embedding) || !ok(proj) || !out_bias.allFinite()) return false;
  for (const auto& l : layers)
    if (!ok(l.gates) || !l.bias.allFinite()) return false;
  return true;
}

LstmWeights LstmWeights::zeros(const LstmDims& dims) {
  LstmWeights w;
  w.dims = dims;
  w.embedding = Eigen::MatrixXd::Zero(dims.vocab, dims.emb);
  w.layers.resize(static_cast<std::size_t>(dims.layers));
  for (int l = 0; l < dims.layers; ++l) {
    const int in = w.layer_input_dim(l);
    w.layers[static_cast<std::size_t>(l)].gates =
        Eigen::MatrixXd::Zero(4 * dims.hidden, in + dims.hidden);
    w.layers[static_cast<std::size_t>(l)].bias = Eigen::VectorXd::Zero(4 * dims.hidden);
  }
  w.proj = Eigen::MatrixXd::Zero(dims.hidden, dims.vocab);
  w.out_bias = Eigen::VectorXd::Zero(dims.vocab);
  return w;
}

LstmWeights LstmWeights::seeded_uniform(const LstmDims& dims, std::uint64_t seed,
                                        double scale) {
  LstmWeights w = zeros(dims);
  SplitMix64 rng(seed);
  for (auto& block : param_blocks(w)) {
    for (std::ptrdiff_t i = 0; i < block.size; ++i)
      block.data[i] = (2.0 * rng.next_double() - 1.0) * scale;
  }
  // forget-gate bias starts at 1 so early cells retain information
  for (auto& layer : w.layers)
    layer.bias.segment(dims.hidden, dims.hidden).setOnes();
  return w;
}

LstmState LstmState::zero(const LstmDims& dims) {
  LstmState s;
  s.h.assign(static_cast<std::size_t>(dims.layers), Eigen::VectorXd::Zero(dims.hidden));
  s.c.assign(static_cast<std::size_t>(dims.layers), Eigen::VectorXd::Zero(dims.hidden));
  return s;
}

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return logits.array() - lse;
}

Eigen::VectorXd logits_from_state(const LstmWeights& w, const LstmState& s) {
  return w.proj.transpose() * s.h.back() + w.out_bias;
}

namespace {

inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}

void step_state(const LstmWeights& w, const LstmState& prev, int token_id, LstmState& next) {
  const int H = w.dims.hidden;
  Eigen::VectorXd input = w.embedding.row(token_id).transpose();
  for (int l = 0; l < w.dims.layers; ++l) {
    const auto& layer = w.layers[static_cast<std::size_t>(l)];
    const int in = w.layer_input_dim(l);
    Eigen::VectorXd concat(in + H);
    concat << input, prev.h[static_cast<std::size_t>(l)];
    Eigen::VectorXd pre = layer.gates * concat + layer.bias;
    Eigen::ArrayXd i = sigmoid(pre.segment(0, H).array());
    Eigen::ArrayXd f = sigmoid(pre.segment(H, H).array());
    Eigen::ArrayXd g = pre.segment(2 * H, H).array().tanh();
    Eigen::ArrayXd o = sigmoid(pre.segment(3 * H, H).array());
    Eigen::ArrayXd c = f * prev.c[static_cast<std::size_t>(l)].array() + i * g;
    next.c[static_cast<std::size_t>(l)] = c.matrix();
    next.h[static_cast<std::size_t>(l)] = (o * c.tanh()).matrix();
    input = next.h[static_cast<std::size_t>(l)];
  }
}

}  // namespace

std::pair<LstmState, Eigen::VectorXd> lstm_step(const LstmWeights& w, const LstmState& s,
                                                int token_id) {
  if (token_id < 0 || token_id >= w.dims.vocab)
    throw IndexOutOfRange("token id outside vocabulary");
  LstmState next = LstmState::zero(w.dims);
  step_state(w, s, token_id, next);
  return {next, logits_from_state(w, next)};
}

ScoredSentence forward(const LstmWeights& w, const LstmState& init,
                       std::span<const int> token_ids) {
  if (token_ids.empty()) throw EmptySentence();
  const int T = static_cast<int>(token_ids.size());
  ScoredSentence out;
  out.token_ids.assign(token_ids.begin(), token_ids.end());
  out.logp.resize(T);
  out.hidden.resize(T, w.dims.hidden);

  LstmState state = init;
  LstmState next = LstmState::zero(w.dims);
  for (int t = 0; t < T; ++t) {
    const Eigen::VectorXd lp = log_softmax(logits_from_state(w, state));
    out.logp(t) = lp(token_ids[static_cast<std::size_t>(t)]);
    step_state(w, state, token_ids[static_cast<std::size_t>(t)], next);
    std::swap(state, next);
    out.hidden.row(t) = state.h.back().transpose();
  }
  return out;
}

LstmState average_init_state(const LstmWeights& w,
                             const std::vector<std::vector<int>>& corpus) {
  if (corpus.empty()) throw EmptyCorpus();
  LstmState sum = LstmState::zero(w.dims);
  LstmState state = LstmState::zero(w.dims);
  LstmState next = LstmState::zero(w.dims);
  std::int64_t n = 0;
  for (const auto& sent : corpus) {
    if (sent.empty()) continue;
    for (auto& h : state.h) h.setZero();
    for (auto& c : state.c) c.setZero();
    for (int id : sent) {
      step_state(w, state, id, next);
      std::swap(state, next);
    }
    for (int l = 0; l < w.dims.layers; ++l) {
      sum.h[static_cast<std::size_t>(l)] += state.h[static_cast<std::size_t>(l)];
      sum.c[static_cast<std::size_t>(l)] += state.c[static_cast<std::size_t>(l)];
    }
    ++n;
  }
  if (n == 0) throw EmptyCorpus();
  for (int l = 0; l < w.dims.layers; ++l) {
    sum.h[static_cast<std::size_t>(l)] /= static_cast<double>(n);
    sum.c[static_cast<std::size_t>(l)] /= static_cast<double>(n);
  }
  return sum;
}

double prefix_perplexity(const ScoredSentence& s, int upto) {
  if (upto < 0 || upto >= s.length()) throw IndexOutOfRange("prefix end out of range");
  const double mean = s.logp.head(upto + 1).sum() / static_cast<double>(upto + 1);
  return std::exp(-mean);
}

double conditional_probability(const ScoredSentence& s, int item) {
  if (item < 0 || item >= s.length()) throw IndexOutOfRange("item position out of range");
  return std::exp(s.logp(item));
}

Eigen::VectorXd fit_unigram(const std::vector<std::vector<int>>& corpus,
                            const Vocabulary& vocab) {
  if (corpus.empty()) throw EmptyCorpus();
  Eigen::VectorXd counts = Eigen::VectorXd::Ones(vocab.size());  // add-one
  std::int64_t total = 0;
  for (const auto& sent : corpus) {
    for (int id : sent) {
      if (id < 0 || id >= vocab.size()) throw IndexOutOfRange("token id outside vocabulary");
      counts(id) += 1.0;
      ++total;
    }
  }
  if (total == 0) throw EmptyCorpus();
  return counts / (static_cast<double>(total) + static_cast<double>(vocab.size()));
}

double slor(const ScoredSentence& s, const Eigen::VectorXd& unigram) {
  double uni_sum = 0.0;
  for (int id : s.token_ids) uni_sum += std::log(unigram(id));
  return (s.logp.sum() - uni_sum) / static_cast<double>(s.length());
}

std::vector<ParamBlock> param_blocks(LstmWeights& w) {
  std::vector<ParamBlock> blocks;
  blocks.push_back({"embedding", w.embedding.data(),
                    static_cast<std::ptrdiff_t>(w.embedding.size())});
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    blocks.push_back({"layer" + std::to_string(l) + ".gates",
                      w.layers[l].gates.data(),
                      static_cast<std::ptrdiff_t>(w.layers[l].gates.size())});
    blocks.push_back({"layer" + std::to_string(l) + ".bias", w.layers[l].bias.data(),
                      static_cast<std::ptrdiff_t>(w.layers[l].bias.size())});
  }
  blocks.push_back({"proj", w.proj.data(), static_cast<std::ptrdiff_t>(w.proj.size())});
  blocks.push_back({"out_bias", w.out_bias.data(),
                    static_cast<std::ptrdiff_t>(w.out_bias.size())});
  return blocks;
}

namespace {

constexpr char kMagic[] = "NPILM1";

void write_f32_row_major(std::ofstream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      float v = static_cast<float>(m(r, c));
      out.write(reinterpret_cast<const char*>(&v), sizeof(float));
    }
  }
}

void read_f32_row_major(std::ifstream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      float v = 0;
      in.read(reinterpret_cast<char*>(&v), sizeof(float));
      m(r, c) = static_cast<double>(v);
    }
  }
  if (!in) throw BadCheckpoint("truncated parameter payload");
}

}  // namespace

// Payload order: embedding (V x emb); per layer: W_i, W_f, W_g, W_o
// (each H x (in+H)), then b_i, b_f, b_g, b_o; projection (H x V);
// output bias (V). All matrices row-major little-endian float32.
void save_checkpoint(const std::string& path, const LstmWeights& w, const Vocabulary& vocab) {
  if (vocab.size() != w.dims.vocab)
    throw DimensionMismatch("vocabulary size does not match weight dims");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);
  out << kMagic << "\n"
      << w.dims.layers << " " << w.dims.emb << " " << w.dims.hidden << " " << w.dims.vocab
      << "\n";
  write_f32_row_major(out, w.embedding);
  const int H = w.dims.hidden;
  for (const auto& layer : w.layers) {
    for (int gate = 0; gate < 4; ++gate)
      write_f32_row_major(out, layer.gates.middleRows(gate * H, H));
    write_f32_row_major(out, layer.bias);
  }
  write_f32_row_major(out, w.proj);
  write_f32_row_major(out, w.out_bias);
  for (const auto& t : vocab.tokens) out << t << "\n";
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

std::pair<LstmWeights, Vocabulary> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  std::string magic, header;
  if (!std::getline(in, magic) || magic != kMagic)
    throw BadCheckpoint("bad magic string in " + path);
  if (!std::getline(in, header)) throw BadCheckpoint("missing dims header");
  std::istringstream hs(header);
  LstmDims dims;
  if (!(hs >> dims.layers >> dims.emb >> dims.hidden >> dims.vocab) || dims.layers <= 0 ||
      dims.emb <= 0 || dims.hidden <= 0 || dims.vocab <= 0)
    throw BadCheckpoint("invalid dims header");

  LstmWeights w = LstmWeights::zeros(dims);
  read_f32_row_major(in, w.embedding);
  const int H = dims.hidden;
  for (auto& layer : w.layers) {
    for (int gate = 0; gate < 4; ++gate) {
      Eigen::MatrixXd block(H, layer.gates.cols());
      read_f32_row_major(in, block);
      layer.gates.middleRows(gate * H, H) = block;
    }
    Eigen::MatrixXd bias(layer.bias.size(), 1);
    read_f32_row_major(in, bias);
    layer.bias = bias.col(0);
  }
  read_f32_row_major(in, w.proj);
  Eigen::MatrixXd out_bias(dims.vocab, 1);
  read_f32_row_major(in, out_bias);
  w.out_bias = out_bias.col(0);

  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) tokens.push_back(line);
  }
  if (static_cast<int>(tokens.size()) != dims.vocab)
    throw BadCheckpoint("vocabulary size " + std::to_string(tokens.size()) +
                        " does not match header " + std::to_string(dims.vocab));
  return {std::move(w), Vocabulary::from_tokens(std::move(tokens))};
}

}  // namespace npiscope::lm
