#include "gcnsel/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gcnsel/log.hpp"
#include "gcnsel/rng.hpp"

namespace gcnsel {

void TrainConfig::validate() const {
  if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
  if (patience < 1 || patience > max_epochs) {
    throw std::invalid_argument("TrainConfig: patience must lie in [1, max_epochs]");
  }
  if (hidden_dim < 1) throw std::invalid_argument("TrainConfig: hidden_dim must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be positive");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw std::invalid_argument("TrainConfig: dropout_p must lie in [0, 1)");
  }
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("TrainConfig: weight_decay must be >= 0");
}

Evaluation evaluate(const ModelParams& p, const SparseMatrix& a_hat, const SparseMatrix& x,
                    std::span<const Index> labels, std::span<const char> mask) {
  const Activations act = forward(a_hat, x, p, 0.0, Mode::kEval, 0);
  Evaluation e;
  e.loss = masked_cross_entropy(act.logits, labels, mask);
  Index hits = 0;
  Index count = 0;
  for (Index r = 0; r < act.probs.rows(); ++r) {
    if (!mask[r]) continue;
    Index best = 0;
    act.probs.row(r).maxCoeff(&best);  // first maximum wins
    hits += best == labels[r] ? 1 : 0;
    ++count;
  }
  e.accuracy = static_cast<double>(hits) / static_cast<double>(count);
  return e;
}

Evaluation evaluate(const ModelParams& p, const Graph& g, const SparseMatrix& x,
                    std::span<const Index> labels, std::span<const char> mask) {
  return evaluate(p, normalized_adjacency(g), x, labels, mask);
}

TrainResult train(const SparseMatrix& a_hat, const SparseMatrix& x,
                  std::span<const Index> labels, Index num_classes, const Split& split,
                  const TrainConfig& cfg) {
  cfg.validate();
  const Index n = a_hat.num_rows;
  if (static_cast<Index>(labels.size()) != n ||
      static_cast<Index>(split.train_mask.size()) != n ||
      static_cast<Index>(split.val_mask.size()) != n ||
      static_cast<Index>(split.test_mask.size()) != n) {
    throw std::invalid_argument("train: labels/split sizes do not match the graph");
  }
  if (split.train_count() == 0) throw std::invalid_argument("train: empty training mask");
  const bool has_val = split.val_count() > 0;
  if (!has_val) warn("validation mask is empty; early stopping keys on the training loss");

  ModelParams params = init_params(x.num_cols, cfg.hidden_dim, num_classes, cfg.seed);
  AdamState adam = AdamState::zeros_like(params);
  const AdamConfig adam_cfg{.lr = cfg.lr};
  const SplitMix64 epoch_seeds(cfg.seed);

  TrainResult result;
  result.best_params = params;
  double best = std::numeric_limits<double>::infinity();
  Index since_best = 0;
  for (Index epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const std::uint64_t dropout_seed = epoch_seeds.split(static_cast<std::uint64_t>(epoch)).state();
    const Activations act = forward(a_hat, x, params, cfg.dropout_p, Mode::kTrain, dropout_seed);
    const LossAndGrads lg =
        loss_and_grads(act, labels, split.train_mask, params, cfg.weight_decay, a_hat);
    adam_step(params, lg.grads, adam, adam_cfg);

    EpochRecord rec{.train_loss = lg.loss, .val_loss = lg.loss};
    if (has_val) rec.val_loss = evaluate(params, a_hat, x, labels, split.val_mask).loss;
    result.history.push_back(rec);
    result.halt_epoch = epoch;

    if (rec.val_loss < best) {
      best = rec.val_loss;
      result.stop_epoch = epoch;
      result.best_params = params;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  if (result.stop_epoch == 0) {
    // Validation loss was never finite; keep the last weights.
    result.stop_epoch = result.halt_epoch;
    result.best_params = params;
  }

  if (split.test_count() > 0) {
    const Evaluation test = evaluate(result.best_params, a_hat, x, labels, split.test_mask);
    result.test_accuracy = test.accuracy;
    result.test_loss = test.loss;
  } else {
    warn("test mask is empty; test metrics are NaN");
    result.test_accuracy = std::numeric_limits<double>::quiet_NaN();
    result.test_loss = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

TrainResult train(const Graph& g, const SparseMatrix& x, std::span<const Index> labels,
                  Index num_classes, const Split& split, const TrainConfig& cfg) {
  return train(normalized_adjacency(g), x, labels, num_classes, split, cfg);
}

}  // namespace gcnsel
