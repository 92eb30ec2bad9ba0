#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcnsel/gcn.hpp"
#include "gcnsel/graph.hpp"
#include "gcnsel/selection.hpp"

namespace gcnsel {

struct TrainConfig {
  Index max_epochs = 200;
  Index patience = 10;
  Index hidden_dim = 16;
  double lr = 0.01;
  double dropout_p = 0.5;
  double weight_decay = 5e-4;  // first layer only
  std::uint64_t seed = 0;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct EpochRecord {
  double train_loss = 0.0;  // training objective, including weight decay
  double val_loss = 0.0;    // cross-entropy on the early-stopping mask
};

struct TrainResult {
  double test_accuracy = 0.0;
  double test_loss = 0.0;
  Index stop_epoch = 0;  // 1-based epoch of the best validation loss
  Index halt_epoch = 0;  // epoch at which training stopped
  std::vector<EpochRecord> history;
  ModelParams best_params;
};

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

// Accuracy (argmax ties to the lowest class) and mean cross-entropy without
// weight decay over the masked nodes. Throws std::invalid_argument for an
// empty mask.
Evaluation evaluate(const ModelParams& p, const SparseMatrix& a_hat, const SparseMatrix& x,
                    std::span<const Index> labels, std::span<const char> mask);
Evaluation evaluate(const ModelParams& p, const Graph& g, const SparseMatrix& x,
                    std::span<const Index> labels, std::span<const char> mask);

/// Full-batch transductive training with Adam and early stopping.
///
/// Each epoch runs a train-mode forward pass, an Adam step on the masked
/// training loss, and an eval-mode pass for the validation loss. Training
/// stops after `patience` epochs without a strict improvement of the
/// validation loss (or at max_epochs); the best-validation weights are then
/// restored and scored on the test mask. An empty validation mask makes
/// early stopping key on the training objective. An empty test mask yields
/// NaN test metrics.
TrainResult train(const SparseMatrix& a_hat, const SparseMatrix& x,
                  std::span<const Index> labels, Index num_classes, const Split& split,
                  const TrainConfig& cfg);
TrainResult train(const Graph& g, const SparseMatrix& x, std::span<const Index> labels,
                  Index num_classes, const Split& split, const TrainConfig& cfg);

}  // namespace gcnsel
