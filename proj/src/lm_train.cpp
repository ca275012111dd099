#include <cmath>
#include <numeric>

#include "npiscope/errors.hpp"
#include "npiscope/lm.hpp"
#include "npiscope/rng.hpp"

namespace npiscope::lm {

namespace {

inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}

struct LayerCache {
  Eigen::VectorXd concat;  // [x; h_prev]
  Eigen::ArrayXd i, f, g, o;
  Eigen::ArrayXd c_prev, c, tanh_c;
};

struct StepCache {
  std::vector<LayerCache> layers;
  Eigen::VectorXd probs;  // softmax at the prediction made FROM the state
                          // preceding this step's consumption
};

// Unrolled forward + backward over one sentence. Targets are
// tokens[0..T-1] followed by eos: the prediction at position k is made
// from the state after consuming k tokens, so the zero state predicts
// the first token and the final state predicts <eos>.
class SentenceGraph {
 public:
  double loss_and_grad(const LstmWeights& w, std::span<const int> tokens, int eos_id,
                       LstmWeights* grad) {
    if (tokens.empty()) throw EmptySentence();
    const int T = static_cast<int>(tokens.size());
    const int P = T + 1;  // prediction positions
    const int L = w.dims.layers;
    const int H = w.dims.hidden;

    std::vector<LstmState> states(static_cast<std::size_t>(T) + 1);
    states[0] = LstmState::zero(w.dims);
    std::vector<StepCache> caches(static_cast<std::size_t>(T));

    double loss = 0.0;
    std::vector<Eigen::VectorXd> dlogits(static_cast<std::size_t>(P));

    for (int k = 0; k < P; ++k) {
      const Eigen::VectorXd logits = logits_from_state(w, states[static_cast<std::size_t>(k)]);
      const Eigen::VectorXd logp = log_softmax(logits);
      const int target = k < T ? tokens[static_cast<std::size_t>(k)] : eos_id;
      loss -= logp(target);
      if (grad) {
        Eigen::VectorXd d = logp.array().exp();
        d(target) -= 1.0;
        dlogits[static_cast<std::size_t>(k)] = d / static_cast<double>(P);
      }
      if (k == T) break;

      // consume tokens[k]
      const int tok = tokens[static_cast<std::size_t>(k)];
      LstmState& prev = states[static_cast<std::size_t>(k)];
      LstmState next = LstmState::zero(w.dims);
      StepCache& cache = caches[static_cast<std::size_t>(k)];
      cache.layers.resize(static_cast<std::size_t>(L));
      Eigen::VectorXd input = w.embedding.row(tok).transpose();
      for (int l = 0; l < L; ++l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        const int in = w.layer_input_dim(l);
        lc.concat.resize(in + H);
        lc.concat << input, prev.h[static_cast<std::size_t>(l)];
        Eigen::VectorXd pre = layer.gates * lc.concat + layer.bias;
        lc.i = sigmoid(pre.segment(0, H).array());
        lc.f = sigmoid(pre.segment(H, H).array());
        lc.g = pre.segment(2 * H, H).array().tanh();
        lc.o = sigmoid(pre.segment(3 * H, H).array());
        lc.c_prev = prev.c[static_cast<std::size_t>(l)].array();
        lc.c = lc.f * lc.c_prev + lc.i * lc.g;
        lc.tanh_c = lc.c.tanh();
        next.c[static_cast<std::size_t>(l)] = lc.c.matrix();
        next.h[static_cast<std::size_t>(l)] = (lc.o * lc.tanh_c).matrix();
        input = next.h[static_cast<std::size_t>(l)];
      }
      states[static_cast<std::size_t>(k + 1)] = std::move(next);
    }
    loss /= static_cast<double>(P);

    if (!grad) return loss;

    // backward
    std::vector<Eigen::VectorXd> dh(static_cast<std::size_t>(L)),
        dc(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) {
      dh[static_cast<std::size_t>(l)] = Eigen::VectorXd::Zero(H);
      dc[static_cast<std::size_t>(l)] = Eigen::VectorXd::Zero(H);
    }

    auto add_projection_grad = [&](int k) {
      const Eigen::VectorXd& d = dlogits[static_cast<std::size_t>(k)];
      grad->proj.noalias() += states[static_cast<std::size_t>(k)].h.back() * d.transpose();
      grad->out_bias += d;
      dh.back().noalias() += w.proj * d;
    };

    add_projection_grad(T);  // eos prediction from the final state
    for (int k = T - 1; k >= 0; --k) {
      // backprop the step that produced states[k+1] from states[k]
      const StepCache& cache = caches[static_cast<std::size_t>(k)];
      Eigen::VectorXd dinput;  // gradient flowing into layer l's input
      for (int l = L - 1; l >= 0; --l) {
        const auto& layer = w.layers[static_cast<std::size_t>(l)];
        auto& glayer = grad->layers[static_cast<std::size_t>(l)];
        const LayerCache& lc = cache.layers[static_cast<std::size_t>(l)];
        const int in = w.layer_input_dim(l);

        Eigen::ArrayXd dh_l = dh[static_cast<std::size_t>(l)].array();
        if (l < L - 1) dh_l += dinput.array();  // from the layer above's input

        Eigen::ArrayXd do_ = dh_l * lc.tanh_c;
        Eigen::ArrayXd dc_l =
            dc[static_cast<std::size_t>(l)].array() + dh_l * lc.o * (1.0 - lc.tanh_c.square());
        Eigen::ArrayXd di = dc_l * lc.g;
        Eigen::ArrayXd dg = dc_l * lc.i;
        Eigen::ArrayXd df = dc_l * lc.c_prev;

        Eigen::VectorXd dpre(4 * H);
        dpre.segment(0, H) = (di * lc.i * (1.0 - lc.i)).matrix();
        dpre.segment(H, H) = (df * lc.f * (1.0 - lc.f)).matrix();
        dpre.segment(2 * H, H) = (dg * (1.0 - lc.g.square())).matrix();
        dpre.segment(3 * H, H) = (do_ * lc.o * (1.0 - lc.o)).matrix();

        glayer.gates.noalias() += dpre * lc.concat.transpose();
        glayer.bias += dpre;

        Eigen::VectorXd dconcat = layer.gates.transpose() * dpre;
        dinput = dconcat.head(in);
        dh[static_cast<std::size_t>(l)] = dconcat.tail(H);
        dc[static_cast<std::size_t>(l)] = (dc_l * lc.f).matrix();
      }
      grad->embedding.row(tokens[static_cast<std::size_t>(k)]) += dinput.transpose();

      // the state we just arrived at (states[k]) also made prediction k
      const Eigen::VectorXd& d = dlogits[static_cast<std::size_t>(k)];
      grad->proj.noalias() += states[static_cast<std::size_t>(k)].h.back() * d.transpose();
      grad->out_bias += d;
      dh.back().noalias() += w.proj * d;
    }
    return loss;
  }
};

double grad_norm(LstmWeights& grad) {
  double sq = 0.0;
  for (auto& block : param_blocks(grad))
    for (std::ptrdiff_t i = 0; i < block.size; ++i) sq += block.data[i] * block.data[i];
  return std::sqrt(sq);
}

void scale_grad(LstmWeights& grad, double s) {
  for (auto& block : param_blocks(grad))
    for (std::ptrdiff_t i = 0; i < block.size; ++i) block.data[i] *= s;
}

void zero_grad(LstmWeights& grad) { scale_grad(grad, 0.0); }

void apply_grad(LstmWeights& w, LstmWeights& grad, double lr) {
  auto wb = param_blocks(w);
  auto gb = param_blocks(grad);
  for (std::size_t b = 0; b < wb.size(); ++b)
    for (std::ptrdiff_t i = 0; i < wb[b].size; ++i) wb[b].data[i] -= lr * gb[b].data[i];
}

}  // namespace

double sentence_loss(const LstmWeights& w, std::span<const int> tokens, int eos_id) {
  SentenceGraph graph;
  return graph.loss_and_grad(w, tokens, eos_id, nullptr);
}

double sentence_loss_grad(const LstmWeights& w, std::span<const int> tokens, int eos_id,
                          LstmWeights& grad) {
  SentenceGraph graph;
  return graph.loss_and_grad(w, tokens, eos_id, &grad);
}

TrainResult train_lm(const std::vector<std::vector<int>>& corpus, const TrainConfig& cfg) {
  if (corpus.empty()) throw EmptyCorpus();
  if (cfg.eos_id < 0 || cfg.eos_id >= cfg.dims.vocab)
    throw IndexOutOfRange("eos id outside vocabulary");
  for (const auto& s : corpus) {
    if (s.empty()) throw EmptySentence();
    for (int id : s)
      if (id < 0 || id >= cfg.dims.vocab) throw IndexOutOfRange("token id outside vocabulary");
  }

  LstmWeights w = LstmWeights::seeded_uniform(cfg.dims, cfg.seed);
  LstmWeights grad = LstmWeights::zeros(cfg.dims);
  SplitMix64 rng(cfg.seed ^ 0x5deece66dULL);

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  SentenceGraph graph;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double total_loss = 0.0;
    std::int64_t positions = 0;
    for (std::size_t idx : order) {
      const auto& sent = corpus[idx];
      zero_grad(grad);
      const double loss = graph.loss_and_grad(w, sent, cfg.eos_id, &grad);
      if (!std::isfinite(loss))
        throw DivergenceDetected("non-finite loss at epoch " + std::to_string(epoch));
      const double norm = grad_norm(grad);
      if (cfg.clip_norm > 0.0 && norm > cfg.clip_norm)
        scale_grad(grad, cfg.clip_norm / norm);
      apply_grad(w, grad, cfg.learning_rate);
      total_loss += loss * static_cast<double>(sent.size() + 1);
      positions += static_cast<std::int64_t>(sent.size()) + 1;
    }
    result.epoch_loss.push_back(total_loss / static_cast<double>(positions));
  }
  if (!w.all_finite()) throw DivergenceDetected("non-finite weights after training");
  result.weights = std::move(w);
  return result;
}

}  // namespace npiscope::lm
