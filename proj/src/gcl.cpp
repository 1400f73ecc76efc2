#include "spectraforge/gcl.hpp"

#include "spectraforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace spectraforge {

namespace {

Vector row_lse(const Matrix& s) {
  Vector out(s.rows());
  for (int i = 0; i < s.rows(); ++i) {
    double m = s.row(i).maxCoeff();
    out(i) = m + std::log((s.row(i).array() - m).exp().sum());
  }
  return out;
}

Vector col_lse(const Matrix& s) {
  Vector out(s.cols());
  for (int j = 0; j < s.cols(); ++j) {
    double m = s.col(j).maxCoeff();
    out(j) = m + std::log((s.col(j).array() - m).exp().sum());
  }
  return out;
}

Matrix row_softmax(const Matrix& s) {
  Matrix p(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i) {
    Vector e = (s.row(i).array() - s.row(i).maxCoeff()).exp();
    p.row(i) = e.transpose() / e.sum();
  }
  return p;
}

Matrix col_softmax(const Matrix& s) {
  Matrix p(s.rows(), s.cols());
  for (int j = 0; j < s.cols(); ++j) {
    Vector e = (s.col(j).array() - s.col(j).maxCoeff()).exp();
    p.col(j) = e / e.sum();
  }
  return p;
}

struct LossAndGrads {
  double loss = 0.0;
  Matrix g1;
  Matrix g2;
};

// Loss and dLoss/dH for both inputs. The cosine path stabilizes row norms
// with 1e-12 so transiently dead ReLU rows do not abort a training run; the
// public infonce() keeps the strict zero-norm error instead.
LossAndGrads infonce_with_grads(const Matrix& h1, const Matrix& h2, double tau,
                                Similarity similarity) {
  int n = static_cast<int>(h1.rows());
  Matrix u1 = h1, u2 = h2;
  Vector n1 = Vector::Ones(n), n2 = Vector::Ones(n);
  if (similarity == Similarity::cosine) {
    n1 = h1.rowwise().norm().array() + 1e-12;
    n2 = h2.rowwise().norm().array() + 1e-12;
    u1 = n1.cwiseInverse().asDiagonal() * h1;
    u2 = n2.cwiseInverse().asDiagonal() * h2;
  }
  Matrix s = u1 * u2.transpose() / tau;
  Vector diag = s.diagonal();
  double l1 = (diag - row_lse(s)).sum();
  double l2 = (diag - col_lse(s)).sum();
  Matrix id = Matrix::Identity(n, n);
  Matrix g = 0.5 * ((id - row_softmax(s)) + (id - col_softmax(s)));
  LossAndGrads out;
  out.loss = 0.5 * (l1 + l2);
  Matrix gu1 = g * u2 / tau;
  Matrix gu2 = g.transpose() * u1 / tau;
  if (similarity == Similarity::cosine) {
    Vector proj1 = gu1.cwiseProduct(u1).rowwise().sum();
    Vector proj2 = gu2.cwiseProduct(u2).rowwise().sum();
    out.g1 = n1.cwiseInverse().asDiagonal() * (gu1 - proj1.asDiagonal() * u1);
    out.g2 = n2.cwiseInverse().asDiagonal() * (gu2 - proj2.asDiagonal() * u2);
  } else {
    out.g1 = gu1;
    out.g2 = gu2;
  }
  return out;
}

}  // namespace

Matrix gcn_normalize(const Matrix& adj) {
  if (adj.rows() != adj.cols()) throw ValidationError("view must be square");
  Matrix b = adj + Matrix::Identity(adj.rows(), adj.cols());
  Vector d = b.rowwise().sum();
  Vector dinv(d.size());
  for (int i = 0; i < d.size(); ++i) {
    dinv(i) = d(i) > 0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  }
  return dinv.asDiagonal() * b * dinv.asDiagonal();
}

Embeddings gcn_encode(const Matrix& adj_view, const Matrix& x, const Matrix& w,
                      bool linear, const std::string& view_tag) {
  if (adj_view.rows() != adj_view.cols() || adj_view.cols() != x.rows() ||
      x.cols() != w.rows()) {
    throw ValidationError("encoder shape mismatch");
  }
  Embeddings e;
  e.h = adj_view * x * w;
  if (!linear) e.h = e.h.cwiseMax(0.0);
  if (!e.h.allFinite()) throw NumericalError("non-finite embeddings");
  e.view_tag = view_tag;
  return e;
}

double infonce(const Embeddings& h1, const Embeddings& h2, double tau,
               Similarity similarity) {
  if (h1.h.rows() != h2.h.rows() || h1.h.cols() != h2.h.cols()) {
    throw ValidationError("embedding shape mismatch");
  }
  if (tau <= 0) throw ValidationError("tau must be positive");
  if (similarity == Similarity::cosine) {
    if (h1.h.rowwise().norm().minCoeff() <= 0 ||
        h2.h.rowwise().norm().minCoeff() <= 0) {
      throw ValidationError("zero-norm embedding row under cosine similarity");
    }
  }
  return infonce_with_grads(h1.h, h2.h, tau, similarity).loss;
}

InvarianceBound invariance_bound_check(const Embeddings& h_a,
                                       const Embeddings& h_v) {
  if (h_a.h.rows() != h_v.h.rows() || h_a.h.cols() != h_v.h.cols()) {
    throw ValidationError("embedding shape mismatch");
  }
  int n = static_cast<int>(h_a.h.rows());
  Matrix s = h_a.h * h_v.h.transpose();
  InvarianceBound out;
  out.lhs = (s.diagonal() - row_lse(s)).sum();
  out.rhs = s.trace() - s.sum() / n;
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

Matrix polynomial_proximity(const Matrix& adj_view,
                            const std::vector<double>& weights) {
  if (weights.empty()) throw ValidationError("empty weight list");
  if (adj_view.rows() != adj_view.cols()) {
    throw ValidationError("view must be square");
  }
  int n = static_cast<int>(adj_view.rows());
  Matrix power = Matrix::Identity(n, n);
  Matrix m = weights[0] * power;
  for (std::size_t k = 1; k < weights.size(); ++k) {
    power = (power * adj_view).eval();
    m += weights[k] * power;
  }
  return m;
}

TrainOutcome train_contrastive(const Graph& g, const ViewProvider& views,
                               const TrainConfig& cfg) {
  if (!g.features) throw ValidationError("training needs node features");
  if (cfg.tau <= 0) throw ValidationError("tau must be positive");
  if (cfg.epochs < 0) throw ValidationError("negative epoch count");
  const Matrix& x = *g.features;
  int d = static_cast<int>(x.cols());
  std::mt19937_64 rng(cfg.seed);
  double s = std::sqrt(6.0 / (d + cfg.dim));
  std::uniform_real_distribution<double> unif(-s, s);
  Matrix w(d, cfg.dim);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < cfg.dim; ++c) w(r, c) = unif(rng);
  }
  TrainOutcome out;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto [v1, v2] = views(epoch);
    Matrix p1 = v1 * x, p2 = v2 * x;
    Matrix z1 = p1 * w, z2 = p2 * w;
    Matrix h1 = cfg.linear_encoder ? z1 : z1.cwiseMax(0.0);
    Matrix h2 = cfg.linear_encoder ? z2 : z2.cwiseMax(0.0);
    LossAndGrads lg = infonce_with_grads(h1, h2, cfg.tau, cfg.similarity);
    if (!std::isfinite(lg.loss)) {
      throw NumericalError("training diverged at epoch " +
                           std::to_string(epoch));
    }
    if (!cfg.linear_encoder) {
      lg.g1 = lg.g1.cwiseProduct((z1.array() > 0).cast<double>().matrix());
      lg.g2 = lg.g2.cwiseProduct((z2.array() > 0).cast<double>().matrix());
    }
    Matrix grad = p1.transpose() * lg.g1 + p2.transpose() * lg.g2;
    w += cfg.lr * (grad - cfg.weight_decay * w);
    out.loss_trace.push_back(lg.loss);
  }
  auto [v1, v2] = views(cfg.epochs);
  Matrix z1 = v1 * x * w;
  out.embeddings.h = cfg.linear_encoder ? z1 : z1.cwiseMax(0.0);
  out.embeddings.view_tag = "view1";
  if (!out.embeddings.h.allFinite()) {
    throw NumericalError("non-finite final embeddings");
  }
  return out;
}

Splits make_splits(const std::vector<int>& labels, int train_per_class,
                   std::uint64_t seed) {
  if (train_per_class < 1) {
    throw ValidationError("train_per_class must be >= 1");
  }
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] < 0) continue;
    by_class[labels[i]].push_back(i);
  }
  if (by_class.size() < 2) {
    throw ValidationError("need at least two labeled classes");
  }
  std::mt19937_64 rng(seed);
  Splits splits;
  for (auto& [label, idx] : by_class) {
    if (static_cast<int>(idx.size()) <= train_per_class) {
      throw ValidationError("class " + std::to_string(label) +
                            " too small for the train split");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int k = 0; k < static_cast<int>(idx.size()); ++k) {
      (k < train_per_class ? splits.train : splits.test).push_back(idx[k]);
    }
  }
  std::sort(splits.train.begin(), splits.train.end());
  std::sort(splits.test.begin(), splits.test.end());
  return splits;
}

EvalMetrics evaluate_embeddings(const Embeddings& e,
                                const std::vector<int>& labels,
                                const Splits& splits, std::uint64_t seed) {
  (void)seed;  // the probe is deterministic; kept for interface stability
  int n = static_cast<int>(e.h.rows());
  auto check_split = [&](const std::vector<int>& idx) {
    for (int i : idx) {
      if (i < 0 || i >= n) throw ValidationError("split index out of range");
      if (i >= static_cast<int>(labels.size()) || labels[i] < 0) {
        throw ValidationError("split references node " + std::to_string(i) +
                              " without a label");
      }
    }
  };
  check_split(splits.train);
  check_split(splits.val);
  check_split(splits.test);
  if (splits.train.empty() || splits.test.empty()) {
    throw ValidationError("train and test splits must be nonempty");
  }
  int k = 0;
  for (int i : splits.train) k = std::max(k, labels[i] + 1);
  for (int i : splits.val) k = std::max(k, labels[i] + 1);
  for (int i : splits.test) k = std::max(k, labels[i] + 1);
  {
    std::set<int> train_classes;
    for (int i : splits.train) train_classes.insert(labels[i]);
    if (train_classes.size() < 2) {
      throw ValidationError("train split holds a single class");
    }
  }

  int dim = static_cast<int>(e.h.cols());
  int nt = static_cast<int>(splits.train.size());
  Vector mu = Vector::Zero(dim), sd = Vector::Zero(dim);
  for (int i : splits.train) mu += e.h.row(i).transpose();
  mu /= nt;
  for (int i : splits.train) {
    sd += (e.h.row(i).transpose() - mu).cwiseAbs2();
  }
  sd = (sd / nt).cwiseSqrt().array() + 1e-12;

  auto design_row = [&](int i) {
    Vector row(dim + 1);
    row.head(dim) = (e.h.row(i).transpose() - mu).cwiseQuotient(sd);
    row(dim) = 1.0;
    return row;
  };
  Matrix xt(nt, dim + 1);
  Matrix y = Matrix::Zero(nt, k);
  for (int r = 0; r < nt; ++r) {
    xt.row(r) = design_row(splits.train[r]).transpose();
    y(r, labels[splits.train[r]]) = 1.0;
  }
  Matrix w = Matrix::Zero(dim + 1, k);
  double prev = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 2000; ++step) {
    Matrix p = row_softmax(xt * w);
    double loss = 0.0;
    for (int r = 0; r < nt; ++r) {
      loss -= std::log(p(r, labels[splits.train[r]]) + 1e-300);
    }
    loss /= nt;
    Matrix grad = xt.transpose() * (p - y) / nt;
    w -= 0.5 * grad;
    if (std::abs(prev - loss) < 1e-6) break;
    prev = loss;
  }

  int ntest = static_cast<int>(splits.test.size());
  std::vector<int> pred(ntest), truth(ntest);
  for (int r = 0; r < ntest; ++r) {
    Vector scores = w.transpose() * design_row(splits.test[r]);
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (scores(c) > scores(best)) best = c;
    }
    pred[r] = best;
    truth[r] = labels[splits.test[r]];
  }
  EvalMetrics metrics;
  int correct = 0;
  for (int r = 0; r < ntest; ++r) correct += pred[r] == truth[r];
  metrics.accuracy = static_cast<double>(correct) / ntest;
  metrics.micro_f1 = metrics.accuracy;  // single-label multiclass identity
  std::set<int> present(truth.begin(), truth.end());
  double macro = 0.0;
  for (int c : present) {
    int tp = 0, fp = 0, fn = 0;
    for (int r = 0; r < ntest; ++r) {
      if (pred[r] == c && truth[r] == c) ++tp;
      if (pred[r] == c && truth[r] != c) ++fp;
      if (pred[r] != c && truth[r] == c) ++fn;
    }
    double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    macro += precision + recall > 0
                 ? 2.0 * precision * recall / (precision + recall)
                 : 0.0;
  }
  metrics.macro_f1 = macro / static_cast<double>(present.size());
  return metrics;
}

}  // namespace spectraforge
