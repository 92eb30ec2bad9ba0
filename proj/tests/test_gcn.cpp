#include <doctest.h>

#include <cmath>
#include <limits>

#include "gcnsel/data_io.hpp"
#include "gcnsel/errors.hpp"
#include "gcnsel/gcn.hpp"
#include "test_support.hpp"

using namespace gcnsel;
using namespace gcnsel::testing;

namespace {

struct Fixture {
  Graph g;
  SparseMatrix a_hat;
  SparseMatrix x;
  std::vector<Index> labels;
  std::vector<char> mask;
  ModelParams p;
};

Fixture make_fixture(Index n, Index f, Index h, Index c, std::uint64_t seed) {
  Fixture fx;
  fx.g = random_graph(n, 0.3, seed);
  fx.a_hat = normalized_adjacency(fx.g);
  Dense xd = random_dense(n, f, seed + 1);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < f; ++k)
      if ((i + k) % 3 == 0) xd(i, k) = 0.0;  // some sparsity
  fx.x = SparseMatrix::from_dense(xd);
  SplitMix64 rng(seed + 2);
  fx.labels.resize(n);
  fx.mask.resize(n);
  for (Index i = 0; i < n; ++i) {
    fx.labels[i] = static_cast<Index>(rng.uniform_below(c));
    fx.mask[i] = i % 2 == 0;
  }
  fx.p = {random_dense(f, h, seed + 3), random_dense(h, c, seed + 4)};
  return fx;
}

// Dense reference forward pass written directly from the propagation rule.
Dense dense_logits(const Graph& g, const Dense& x, const ModelParams& p) {
  const Index n = g.num_nodes();
  Dense a = dense_adjacency(g) + Dense::Identity(n, n);
  Dense dinv = Dense::Zero(n, n);
  for (Index i = 0; i < n; ++i) dinv(i, i) = 1.0 / std::sqrt(a.row(i).sum());
  const Dense a_hat = dinv * a * dinv;
  const Dense h = (a_hat * x * p.w0).cwiseMax(0.0);
  return a_hat * h * p.w1;
}

double objective(const Fixture& fx, const ModelParams& p, double dropout, double wd,
                 std::uint64_t seed) {
  const Activations act = forward(fx.a_hat, fx.x, p, dropout, Mode::kTrain, seed);
  return loss_and_grads(act, fx.labels, fx.mask, p, wd, fx.a_hat).loss;
}

// Central finite differences on 20 random coordinates of each layer.
void check_gradients(double dropout, double wd, std::uint64_t seed) {
  const Fixture fx = make_fixture(8, 6, 5, 3, seed);
  const Activations act = forward(fx.a_hat, fx.x, fx.p, dropout, Mode::kTrain, seed);
  const LossAndGrads lg = loss_and_grads(act, fx.labels, fx.mask, fx.p, wd, fx.a_hat);
  constexpr double kStep = 1e-5;
  SplitMix64 rng(seed + 50);
  for (int layer = 0; layer < 2; ++layer) {
    for (int trial = 0; trial < 20; ++trial) {
      ModelParams plus = fx.p;
      ModelParams minus = fx.p;
      Dense& wp = layer == 0 ? plus.w0 : plus.w1;
      Dense& wm = layer == 0 ? minus.w0 : minus.w1;
      const Index r = static_cast<Index>(rng.uniform_below(wp.rows()));
      const Index c = static_cast<Index>(rng.uniform_below(wp.cols()));
      wp(r, c) += kStep;
      wm(r, c) -= kStep;
      const double fd = (objective(fx, plus, dropout, wd, seed) -
                         objective(fx, minus, dropout, wd, seed)) / (2.0 * kStep);
      const double analytic = (layer == 0 ? lg.grads.w0 : lg.grads.w1)(r, c);
      const double rel = std::abs(fd - analytic) / std::max({std::abs(fd), std::abs(analytic), 1e-6});
      INFO("layer " << layer << " (" << r << "," << c << ") fd " << fd << " analytic " << analytic);
      CHECK(rel < 1e-4);
    }
  }
}

}  // namespace

TEST_CASE("init_params is deterministic, shaped and bounded") {
  const ModelParams a = init_params(4, 3, 2, 7);
  const ModelParams b = init_params(4, 3, 2, 7);
  CHECK(a.w0 == b.w0);
  CHECK(a.w1 == b.w1);
  CHECK(init_params(4, 3, 2, 8).w0 != a.w0);

  const ModelParams cora = init_params(1433, 16, 7, 0);
  CHECK(cora.w0.rows() == 1433);
  CHECK(cora.w0.cols() == 16);
  CHECK(cora.w1.rows() == 16);
  CHECK(cora.w1.cols() == 7);
  CHECK(cora.w0.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / (1433 + 16)));
  CHECK(cora.w1.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / (16 + 7)));

  CHECK_THROWS_AS(init_params(0, 3, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(init_params(4, 0, 2, 0), std::invalid_argument);
}

TEST_CASE("single self-looped node with zero weights gives uniform probabilities") {
  const Graph g = build_graph(EdgeList{}, 1);
  const SparseMatrix a_hat = normalized_adjacency(g);
  const SparseMatrix x = SparseMatrix::from_dense(Dense::Ones(1, 3));
  const ModelParams p{Dense::Zero(3, 2), Dense::Zero(2, 4)};
  const Activations act = forward(a_hat, x, p, 0.0, Mode::kEval, 0);
  CHECK(act.logits.cwiseAbs().maxCoeff() == 0.0);
  for (Index c = 0; c < 4; ++c) CHECK(act.probs(0, c) == doctest::Approx(0.25));
}

TEST_CASE("eval mode is a pure function") {
  const Fixture fx = make_fixture(10, 6, 4, 3, 1);
  const Activations a = forward(fx.a_hat, fx.x, fx.p, 0.5, Mode::kEval, 1);
  const Activations b = forward(fx.a_hat, fx.x, fx.p, 0.5, Mode::kEval, 999);
  CHECK(a.logits == b.logits);
  CHECK(a.probs == b.probs);
}

TEST_CASE("forward matches the dense reference") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Fixture fx = make_fixture(5, 4, 3, 2, seed);
    const Activations act = forward(fx.a_hat, fx.x, fx.p, 0.0, Mode::kEval, 0);
    const Dense ref = dense_logits(fx.g, fx.x.to_dense(), fx.p);
    CHECK((act.logits - ref).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(act.hidden.minCoeff() >= 0.0);
    for (Index r = 0; r < act.probs.rows(); ++r) CHECK(std::abs(act.probs.row(r).sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("train-mode dropout uses inverted scaling") {
  const Fixture fx = make_fixture(12, 6, 8, 3, 4);
  const Activations act = forward(fx.a_hat, fx.x, fx.p, 0.5, Mode::kTrain, 3);
  for (Index k = 0; k < fx.x.nnz(); ++k) {
    const double v = act.x_dropped.values[k];
    CHECK((v == 0.0 || v == doctest::Approx(2.0 * fx.x.values[k])));
  }
  for (Index i = 0; i < act.hidden_scale.size(); ++i) {
    const double s = act.hidden_scale.data()[i];
    CHECK((s == 0.0 || s == 2.0));
  }
  const Activations again = forward(fx.a_hat, fx.x, fx.p, 0.5, Mode::kTrain, 3);
  CHECK(again.logits == act.logits);
}

TEST_CASE("forward rejects bad arguments") {
  const Fixture fx = make_fixture(6, 4, 3, 2, 2);
  CHECK_THROWS_AS(forward(fx.a_hat, fx.x, fx.p, 1.0, Mode::kTrain, 0), std::invalid_argument);
  CHECK_THROWS_AS(forward(fx.a_hat, fx.x, fx.p, -0.1, Mode::kTrain, 0), std::invalid_argument);
  ModelParams wrong = fx.p;
  wrong.w0 = Dense::Zero(5, 3);
  CHECK_THROWS_AS(forward(fx.a_hat, fx.x, wrong, 0.0, Mode::kEval, 0), std::invalid_argument);
}

TEST_CASE("softmax stays normalized for extreme logits") {
  SplitMix64 rng(3);
  for (double magnitude : {1.0, 1e2, 1e3, 1e4}) {
    Dense logits(50, 7);
    for (Index i = 0; i < logits.size(); ++i) logits.data()[i] = magnitude * (2.0 * rng.uniform() - 1.0);
    const Dense p = row_softmax(logits);
    CHECK(p.allFinite());
    CHECK(p.minCoeff() >= 0.0);
    CHECK(p.maxCoeff() <= 1.0);
    for (Index r = 0; r < p.rows(); ++r) CHECK(std::abs(p.row(r).sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("loss of zero weights is ln(C)") {
  Fixture fx = make_fixture(9, 5, 4, 6, 3);
  fx.p = {Dense::Zero(5, 4), Dense::Zero(4, 6)};
  const Activations act = forward(fx.a_hat, fx.x, fx.p, 0.0, Mode::kEval, 0);
  const LossAndGrads lg = loss_and_grads(act, fx.labels, fx.mask, fx.p, 5e-4, fx.a_hat);
  CHECK(lg.loss == doctest::Approx(std::log(6.0)));
}

TEST_CASE("cross-entropy vanishes for confidently correct predictions") {
  Dense logits = Dense::Zero(3, 3);
  const std::vector<Index> labels{0, 2, 1};
  for (Index r = 0; r < 3; ++r) logits(r, labels[r]) = 60.0;
  const std::vector<char> mask{1, 1, 1};
  CHECK(masked_cross_entropy(logits, labels, mask) < 1e-20);
  CHECK_THROWS_AS(masked_cross_entropy(logits, labels, std::vector<char>{0, 0, 0}),
                  std::invalid_argument);
}

TEST_CASE("analytic gradients match finite differences") {
  SUBCASE("no dropout, no decay") { check_gradients(0.0, 0.0, 11); }
  SUBCASE("no dropout, with decay") { check_gradients(0.0, 5e-2, 12); }
  SUBCASE("dropout with fixed masks") { check_gradients(0.5, 5e-4, 13); }
  SUBCASE("heavy dropout") { check_gradients(0.8, 0.0, 14); }
}

TEST_CASE("forward is permutation equivariant") {
  const Fixture fx = make_fixture(10, 5, 4, 3, 21);
  const auto perm = random_permutation(10, 22);
  const Dense xd = fx.x.to_dense();
  Dense xp(10, 5);
  for (Index i = 0; i < 10; ++i) xp.row(perm[i]) = xd.row(i);
  const Activations a = forward(fx.a_hat, fx.x, fx.p, 0.0, Mode::kEval, 0);
  const Activations b = forward(normalized_adjacency(permute(fx.g, perm)),
                                SparseMatrix::from_dense(xp), fx.p, 0.0, Mode::kEval, 0);
  for (Index i = 0; i < 10; ++i) {
    CHECK((a.logits.row(i) - b.logits.row(perm[i])).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("adam: zero gradient leaves fresh parameters unchanged") {
  ModelParams p = init_params(3, 2, 2, 1);
  const ModelParams before = p;
  AdamState st = AdamState::zeros_like(p);
  const ModelParams zero{Dense::Zero(3, 2), Dense::Zero(2, 2)};
  adam_step(p, zero, st, {});
  CHECK(p.w0 == before.w0);
  CHECK(p.w1 == before.w1);
  CHECK(st.t == 1);
}

TEST_CASE("adam: first step moves each coordinate by about lr against the gradient") {
  ModelParams p{Dense::Zero(2, 2), Dense::Zero(2, 1)};
  AdamState st = AdamState::zeros_like(p);
  ModelParams g{(Dense(2, 2) << 3.0, -0.5, 1e-3, -20.0).finished(),
                (Dense(2, 1) << 0.25, -4.0).finished()};
  adam_step(p, g, st, {.lr = 0.01});
  for (Index i = 0; i < 4; ++i) {
    const double gi = g.w0.data()[i];
    CHECK(p.w0.data()[i] == doctest::Approx(-0.01 * (gi > 0 ? 1 : -1)).epsilon(1e-4));
  }
  CHECK(p.w1(0, 0) == doctest::Approx(-0.01).epsilon(1e-4));
  CHECK(p.w1(1, 0) == doctest::Approx(0.01).epsilon(1e-4));
  CHECK(st.v.w0.minCoeff() >= 0.0);
}

TEST_CASE("adam matches a scalar reference on a quadratic") {
  // f(a, b) = 2 (a - 1)^2 + 0.5 (b + 3)^2, one parameter in each layer.
  ModelParams p{Dense::Constant(1, 1, 0.4), Dense::Constant(1, 1, 2.0)};
  AdamState st = AdamState::zeros_like(p);
  const AdamConfig cfg{.lr = 0.05, .beta1 = 0.9, .beta2 = 0.999, .eps = 1e-8};

  double a = 0.4, b = 2.0, ma = 0, va = 0, mb = 0, vb = 0;
  for (int t = 1; t <= 100; ++t) {
    ModelParams g{Dense::Constant(1, 1, 4.0 * (p.w0(0, 0) - 1.0)),
                  Dense::Constant(1, 1, p.w1(0, 0) + 3.0)};
    adam_step(p, g, st, cfg);

    const double ga = 4.0 * (a - 1.0), gb = b + 3.0;
    ma = 0.9 * ma + 0.1 * ga;
    va = 0.999 * va + 0.001 * ga * ga;
    mb = 0.9 * mb + 0.1 * gb;
    vb = 0.999 * vb + 0.001 * gb * gb;
    const double c1 = 1.0 - std::pow(0.9, t), c2 = 1.0 - std::pow(0.999, t);
    a -= 0.05 * (ma / c1) / (std::sqrt(va / c2) + 1e-8);
    b -= 0.05 * (mb / c1) / (std::sqrt(vb / c2) + 1e-8);
    CHECK(std::abs(p.w0(0, 0) - a) < 1e-12);
    CHECK(std::abs(p.w1(0, 0) - b) < 1e-12);
  }
  CHECK(st.t == 100);
}

TEST_CASE("adam rejects non-finite gradients and mismatched shapes") {
  ModelParams p = init_params(2, 2, 2, 0);
  AdamState st = AdamState::zeros_like(p);
  ModelParams g{Dense::Zero(2, 2), Dense::Zero(2, 2)};
  g.w1(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(p, g, st, {}), NumericalError);
  CHECK(st.t == 0);
  ModelParams wrong{Dense::Zero(3, 2), Dense::Zero(2, 2)};
  CHECK_THROWS_AS(adam_step(p, wrong, st, {}), std::invalid_argument);
}
