#pragma once

#include <cstdint>
#include <span>

#include "gcnsel/graph.hpp"

namespace gcnsel {

/// Weights of the two-layer GCN
///
///   logits = A_hat * ReLU(A_hat * X * W0) * W1
///
/// where A_hat is the self-looped symmetric-normalized adjacency.
struct ModelParams {
  Dense w0;  // num_features x hidden_dim
  Dense w1;  // hidden_dim x num_classes
};

enum class Mode { kTrain, kEval };

struct Activations {
  SparseMatrix x_dropped;  // input features after dropout (the input itself in eval)
  Dense pre_hidden;        // A_hat * X * W0
  Dense hidden;            // ReLU(pre_hidden)
  Dense hidden_scale;      // per-element dropout multiplier; empty when no dropout
  Dense hidden_dropped;
  Dense logits;
  Dense probs;
};

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  ModelParams m;
  ModelParams v;
  std::int64_t t = 0;

  static AdamState zeros_like(const ModelParams& p);
};

struct LossAndGrads {
  double loss = 0.0;
  ModelParams grads;
};

// Glorot-uniform weights, deterministic in seed. Throws std::invalid_argument
// for a zero dimension.
ModelParams init_params(Index num_features, Index hidden_dim, Index num_classes,
                        std::uint64_t seed);

// Row softmax with per-row max subtraction.
Dense row_softmax(const Dense& logits);

// In train mode, inverted dropout with rate dropout_p is applied to the
// nonzero input features and to the hidden activations; masks are drawn from
// seed. Eval mode is deterministic and ignores seed.
Activations forward(const SparseMatrix& a_hat, const SparseMatrix& x,
                    const ModelParams& p, double dropout_p, Mode mode,
                    std::uint64_t seed);

// Mean cross-entropy over masked rows, computed as logsumexp(logits) - logit.
// Throws std::invalid_argument for an empty mask.
double masked_cross_entropy(const Dense& logits, std::span<const Index> labels,
                            std::span<const char> mask);

// Masked cross-entropy plus weight_decay * 0.5 * ||W0||_F^2, and its gradient
// with respect to both weight matrices, back-propagated through the dropout
// masks recorded in act.
LossAndGrads loss_and_grads(const Activations& act, std::span<const Index> labels,
                            std::span<const char> train_mask, const ModelParams& p,
                            double weight_decay, const SparseMatrix& a_hat);

// Bias-corrected Adam. Throws NumericalError on a non-finite gradient entry
// and std::invalid_argument on shape mismatch.
void adam_step(ModelParams& p, const ModelParams& grads, AdamState& state,
               const AdamConfig& cfg);

}  // namespace gcnsel
