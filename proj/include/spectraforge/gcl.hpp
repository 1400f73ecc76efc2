#pragma once

#include "spectraforge/graph.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace spectraforge {

struct Embeddings {
  Matrix h;  // row i = embedding of node i
  std::string view_tag;
};

enum class Similarity { dot, cosine };

struct TrainConfig {
  int dim = 8;
  double lr = 1e-3;
  double tau = 0.5;
  int epochs = 300;
  double weight_decay = 0.0;
  bool linear_encoder = false;
  Similarity similarity = Similarity::cosine;
  std::uint64_t seed = 0;
};

struct InvarianceBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct TrainOutcome {
  Embeddings embeddings;  // first-view embeddings at the final weights
  std::vector<double> loss_trace;
};

struct Splits {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

struct EvalMetrics {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
};

// Yields the pair of view matrices used at a given epoch.
using ViewProvider = std::function<std::pair<Matrix, Matrix>(int epoch)>;

// Symmetric self-loop normalization D^{-1/2}(A + I)D^{-1/2} applied to raw
// adjacency-like view matrices before encoding. Operator-valued views
// (eigenspace filters, diffusion matrices) are meant to skip this.
Matrix gcn_normalize(const Matrix& adj);

// H = act(view * x * w); act is elementwise ReLU unless linear.
Embeddings gcn_encode(const Matrix& adj_view, const Matrix& x,
                      const Matrix& w, bool linear,
                      const std::string& view_tag = "");

// Symmetrized contrastive log-likelihood
//   sum_i (log p(i -> i | view2) + log p(i -> i | view1)) / 2
// with softmax over all nodes of the opposite view. Always <= 0; training
// maximizes it. Cosine similarity errors on zero-norm rows.
double infonce(const Embeddings& h1, const Embeddings& h2, double tau,
               Similarity similarity);

// Single-direction loss sum_i log p(i -> i) at dot similarity, tau = 1,
// against rhs = tr(H_A H_V^T) - sum(H_A H_V^T) / n.
InvarianceBound invariance_bound_check(const Embeddings& h_a,
                                       const Embeddings& h_v);

// M = sum_k weights[k] * adj_view^k (power 0 = I).
Matrix polynomial_proximity(const Matrix& adj_view,
                            const std::vector<double>& weights);

// Full-batch gradient ascent on infonce over the shared encoder weights.
// Deterministic per cfg.seed; NumericalError (with the epoch index) on
// non-finite loss.
TrainOutcome train_contrastive(const Graph& g, const ViewProvider& views,
                               const TrainConfig& cfg);

// Per-class stratified sample of train_per_class nodes; every remaining
// node goes to test (the linear probe runs a fixed schedule, so val stays
// empty).
Splits make_splits(const std::vector<int>& labels, int train_per_class,
                   std::uint64_t seed);

// Linear probe: multinomial logistic regression on the train split
// (gradient descent, tolerance 1e-6 or 2000 steps), metrics on test.
EvalMetrics evaluate_embeddings(const Embeddings& e,
                                const std::vector<int>& labels,
                                const Splits& splits, std::uint64_t seed);

}  // namespace spectraforge
