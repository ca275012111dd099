#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace npiscope::lm {

inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kEosToken = "<eos>";

struct Vocabulary {
  std::vector<std::string> tokens;  // id -> token
  std::unordered_map<std::string, int> ids;
  int unk_id = 0;
  int eos_id = 1;
  std::vector<std::int64_t> counts;  // unigram counts per id (0 when loaded)

  int size() const { return static_cast<int>(tokens.size()); }
  int id_or_unk(const std::string& token) const;
  std::vector<int> encode(std::span<const std::string> sentence) const;

  /// Vocabulary over a tokenized corpus: <unk>, <eos>, then corpus tokens
  /// ordered by descending count, ties broken lexicographically.
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus);
  static Vocabulary from_tokens(std::vector<std::string> tokens);
};

struct LstmDims {
  int layers = 2;
  int emb = 32;
  int hidden = 64;
  int vocab = 0;

  bool operator==(const LstmDims&) const = default;
};

/// One layer's gate parameters. `gates` stacks the input, forget, cell
/// and output gate matrices as four row blocks of `hidden` rows each;
/// columns run over [x; h].
struct LstmLayer {
  Eigen::MatrixXd gates;  // 4H x (in + H)
  Eigen::VectorXd bias;   // 4H
};

struct LstmWeights {
  LstmDims dims;
  Eigen::MatrixXd embedding;  // V x emb
  std::vector<LstmLayer> layers;
  Eigen::MatrixXd proj;      // hidden x V; logits = proj^T h + out_bias
  Eigen::VectorXd out_bias;  // V

  int layer_input_dim(int layer) const { return layer == 0 ? dims.emb : dims.hidden; }
  bool all_finite() const;

  static LstmWeights zeros(const LstmDims& dims);
  static LstmWeights seeded_uniform(const LstmDims& dims, std::uint64_t seed,
                                    double scale = 0.1);
};

struct LstmState {
  std::vector<Eigen::VectorXd> h;  // per layer, hidden
  std::vector<Eigen::VectorXd> c;

  static LstmState zero(const LstmDims& dims);
};

/// Per-position scores of one sentence: natural-log probabilities
/// logP(w_i | w_<i) and the final-layer hidden state after consuming w_i.
struct ScoredSentence {
  std::vector<int> token_ids;
  Eigen::VectorXd logp;    // length T
  Eigen::MatrixXd hidden;  // T x hidden

  int length() const { return static_cast<int>(token_ids.size()); }
};

Eigen::VectorXd log_softmax(const Eigen::VectorXd& logits);

/// Logits predicting the next token from a state (before consuming it).
Eigen::VectorXd logits_from_state(const LstmWeights& w, const LstmState& s);

/// One recurrence step: consume `token_id`, return the new state and the
/// logits it projects (i.e. the distribution over the following token).
std::pair<LstmState, Eigen::VectorXd> lstm_step(const LstmWeights& w, const LstmState& s,
                                                int token_id);

ScoredSentence forward(const LstmWeights& w, const LstmState& init,
                       std::span<const int> token_ids);

/// Elementwise mean of the final (h, c) over all corpus sentences, each
/// run from the zero state. Used to initialize scoring runs.
LstmState average_init_state(const LstmWeights& w,
                             const std::vector<std::vector<int>>& corpus);

/// exp(-(1/(upto+1)) * sum_{i<=upto} logP_i)
double prefix_perplexity(const ScoredSentence& s, int upto);

double conditional_probability(const ScoredSentence& s, int item);

/// Add-one-smoothed maximum-likelihood unigram distribution over the
/// vocabulary, fit on raw corpus tokens (no <eos> appended).
Eigen::VectorXd fit_unigram(const std::vector<std::vector<int>>& corpus,
                            const Vocabulary& vocab);

/// (sum_i logP_i - sum_i log P_uni(w_i)) / length
double slor(const ScoredSentence& s, const Eigen::VectorXd& unigram);

struct TrainConfig {
  LstmDims dims;
  double learning_rate = 0.5;
  int epochs = 10;
  std::uint64_t seed = 1;
  double clip_norm = 5.0;
  int eos_id = 1;
};

struct TrainResult {
  LstmWeights weights;
  std::vector<double> epoch_loss;  // mean per-position cross-entropy
};

/// Per-sentence SGD with full backpropagation through time. Each sentence
/// predicts its tokens plus a final <eos> target, starting from the zero
/// state. Deterministic for a fixed seed.
TrainResult train_lm(const std::vector<std::vector<int>>& corpus, const TrainConfig& cfg);

/// Mean cross-entropy of one sentence (targets = tokens + <eos>).
double sentence_loss(const LstmWeights& w, std::span<const int> tokens, int eos_id);

/// Same, also accumulating parameter gradients into `grad` (which must be
/// zero-initialized with matching dims). Returns the loss.
double sentence_loss_grad(const LstmWeights& w, std::span<const int> tokens, int eos_id,
                          LstmWeights& grad);

struct ParamBlock {
  std::string name;
  double* data;
  std::ptrdiff_t size;
};

/// Flat views over every parameter block, in checkpoint order.
std::vector<ParamBlock> param_blocks(LstmWeights& w);

/// Binary checkpoint: "NPILM1" magic, text dims header, float32 payload,
/// vocabulary lines. See README for the exact layout.
void save_checkpoint(const std::string& path, const LstmWeights& w, const Vocabulary& vocab);
std::pair<LstmWeights, Vocabulary> load_checkpoint(const std::string& path);

}  // namespace npiscope::lm
