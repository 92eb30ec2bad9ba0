#include "gcnsel/gcn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gcnsel/errors.hpp"
#include "gcnsel/rng.hpp"

namespace gcnsel {
namespace {

Dense glorot(Index fan_in, Index fan_out, SplitMix64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Dense w(fan_in, fan_out);
  for (Index r = 0; r < fan_in; ++r) {
    for (Index c = 0; c < fan_out; ++c) w(r, c) = (2.0 * rng.uniform() - 1.0) * limit;
  }
  return w;
}

void check_mask(std::span<const Index> labels, std::span<const char> mask, Index rows,
                const char* who) {
  if (static_cast<Index>(labels.size()) != rows || static_cast<Index>(mask.size()) != rows) {
    throw std::invalid_argument(std::string(who) + ": labels/mask length != node count");
  }
}

}  // namespace

AdamState AdamState::zeros_like(const ModelParams& p) {
  AdamState s;
  s.m = {Dense::Zero(p.w0.rows(), p.w0.cols()), Dense::Zero(p.w1.rows(), p.w1.cols())};
  s.v = s.m;
  return s;
}

ModelParams init_params(Index num_features, Index hidden_dim, Index num_classes,
                        std::uint64_t seed) {
  if (num_features < 1 || hidden_dim < 1 || num_classes < 1) {
    throw std::invalid_argument("init_params: dimensions must be >= 1");
  }
  SplitMix64 rng = stream_rng(seed, Stream::kInit);
  ModelParams p;
  p.w0 = glorot(num_features, hidden_dim, rng);
  p.w1 = glorot(hidden_dim, num_classes, rng);
  return p;
}

Dense row_softmax(const Dense& logits) {
  Dense probs(logits.rows(), logits.cols());
  for (Index r = 0; r < logits.rows(); ++r) {
    const double mx = logits.row(r).maxCoeff();
    probs.row(r) = (logits.row(r).array() - mx).exp();
    probs.row(r) /= probs.row(r).sum();
  }
  return probs;
}

Activations forward(const SparseMatrix& a_hat, const SparseMatrix& x, const ModelParams& p,
                    double dropout_p, Mode mode, std::uint64_t seed) {
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw std::invalid_argument("forward: dropout_p must lie in [0, 1), got " +
                                std::to_string(dropout_p));
  }
  if (a_hat.num_rows != a_hat.num_cols || x.num_rows != a_hat.num_rows ||
      x.num_cols != p.w0.rows() || p.w0.cols() != p.w1.rows()) {
    throw std::invalid_argument(
        "forward: shape mismatch (a_hat " + std::to_string(a_hat.num_rows) + "x" +
        std::to_string(a_hat.num_cols) + ", x " + std::to_string(x.num_rows) + "x" +
        std::to_string(x.num_cols) + ", w0 " + std::to_string(p.w0.rows()) + "x" +
        std::to_string(p.w0.cols()) + ", w1 " + std::to_string(p.w1.rows()) + "x" +
        std::to_string(p.w1.cols()) + ")");
  }

  const bool drop = mode == Mode::kTrain && dropout_p > 0.0;
  const double keep_scale = 1.0 / (1.0 - dropout_p);
  SplitMix64 rng = stream_rng(seed, Stream::kDropout);

  Activations act;
  act.x_dropped = x;
  if (drop) {
    for (double& v : act.x_dropped.values) v = rng.uniform() < dropout_p ? 0.0 : v * keep_scale;
  }

  act.pre_hidden = spmm(a_hat, spmm(act.x_dropped, p.w0));
  act.hidden = act.pre_hidden.cwiseMax(0.0);
  if (drop) {
    act.hidden_scale.resize(act.hidden.rows(), act.hidden.cols());
    for (Index r = 0; r < act.hidden.rows(); ++r) {
      for (Index c = 0; c < act.hidden.cols(); ++c) {
        act.hidden_scale(r, c) = rng.uniform() < dropout_p ? 0.0 : keep_scale;
      }
    }
    act.hidden_dropped = act.hidden.cwiseProduct(act.hidden_scale);
  } else {
    act.hidden_dropped = act.hidden;
  }

  act.logits = spmm(a_hat, act.hidden_dropped * p.w1);
  act.probs = row_softmax(act.logits);
  return act;
}

double masked_cross_entropy(const Dense& logits, std::span<const Index> labels,
                            std::span<const char> mask) {
  check_mask(labels, mask, logits.rows(), "masked_cross_entropy");
  double total = 0.0;
  Index count = 0;
  for (Index r = 0; r < logits.rows(); ++r) {
    if (!mask[r]) continue;
    const double mx = logits.row(r).maxCoeff();
    const double lse = mx + std::log((logits.row(r).array() - mx).exp().sum());
    total += lse - logits(r, labels[r]);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("masked_cross_entropy: empty mask");
  return total / static_cast<double>(count);
}

LossAndGrads loss_and_grads(const Activations& act, std::span<const Index> labels,
                            std::span<const char> train_mask, const ModelParams& p,
                            double weight_decay, const SparseMatrix& a_hat) {
  LossAndGrads out;
  out.loss = masked_cross_entropy(act.logits, labels, train_mask) +
             0.5 * weight_decay * p.w0.squaredNorm();

  Index count = 0;
  for (char m : train_mask) count += m ? 1 : 0;
  const double inv_count = 1.0 / static_cast<double>(count);

  // d loss / d logits: (probs - onehot) / count on masked rows.
  Dense d_logits = Dense::Zero(act.logits.rows(), act.logits.cols());
  for (Index r = 0; r < act.logits.rows(); ++r) {
    if (!train_mask[r]) continue;
    d_logits.row(r) = act.probs.row(r) * inv_count;
    d_logits(r, labels[r]) -= inv_count;
  }

  // A_hat is symmetric, so A_hat^T * G == A_hat * G.
  const Dense d_hw = spmm(a_hat, d_logits);
  out.grads.w1 = act.hidden_dropped.transpose() * d_hw;

  Dense d_hidden = d_hw * p.w1.transpose();
  if (act.hidden_scale.size() != 0) d_hidden.array() *= act.hidden_scale.array();
  d_hidden.array() *= (act.pre_hidden.array() > 0.0).cast<double>();

  const Dense d_xw = spmm(a_hat, d_hidden);
  out.grads.w0 = spmm_transposed(act.x_dropped, d_xw) + weight_decay * p.w0;
  return out;
}

void adam_step(ModelParams& p, const ModelParams& grads, AdamState& state,
               const AdamConfig& cfg) {
  auto same_shape = [](const Dense& a, const Dense& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
  };
  if (!same_shape(p.w0, grads.w0) || !same_shape(p.w1, grads.w1) ||
      !same_shape(p.w0, state.m.w0) || !same_shape(p.w1, state.m.w1) ||
      !same_shape(p.w0, state.v.w0) || !same_shape(p.w1, state.v.w1)) {
    throw std::invalid_argument("adam_step: parameter, gradient and state shapes differ");
  }
  if (!grads.w0.allFinite() || !grads.w1.allFinite()) {
    throw NumericalError("adam_step: non-finite gradient at step " +
                         std::to_string(state.t + 1) + " (|g0|max " +
                         std::to_string(grads.w0.cwiseAbs().maxCoeff()) + ", |g1|max " +
                         std::to_string(grads.w1.cwiseAbs().maxCoeff()) + ")");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  auto update = [&](Dense& param, const Dense& grad, Dense& m, Dense& v) {
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    param.array() -= cfg.lr * (m.array() / bias1) / ((v.array() / bias2).sqrt() + cfg.eps);
  };
  update(p.w0, grads.w0, state.m.w0, state.v.w0);
  update(p.w1, grads.w1, state.m.w1, state.v.w1);
}

}  // namespace gcnsel
