#include "spectraforge/transport.hpp"

#include "spectraforge/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spectraforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marginals(const Matrix& k, const Vector& a, const Vector& b) {
  int n = static_cast<int>(k.rows());
  if (k.cols() != n || a.size() != n || b.size() != n) {
    throw ValidationError("kernel/marginal shape mismatch");
  }
  if (a.minCoeff() <= 0 || b.minCoeff() <= 0) {
    throw ValidationError("marginals must be strictly positive");
  }
  double sa = a.sum(), sb = b.sum();
  if (std::abs(sa - sb) > 1e-6 * std::max(std::abs(sa), std::abs(sb))) {
    throw ValidationError("marginal sums differ beyond 1e-6 relative");
  }
}

void check_kernel_support(const Matrix& k) {
  if (k.minCoeff() < 0) throw ValidationError("kernel entries must be >= 0");
  for (int i = 0; i < k.rows(); ++i) {
    if (k.row(i).maxCoeff() <= 0) {
      throw ValidationError("kernel row " + std::to_string(i) + " is zero");
    }
  }
  for (int j = 0; j < k.cols(); ++j) {
    if (k.col(j).maxCoeff() <= 0) {
      throw ValidationError("kernel column " + std::to_string(j) + " is zero");
    }
  }
}

void fill_residuals(SinkhornResult& r, const Vector& a, const Vector& b) {
  r.row_residual = (r.scaled.rowwise().sum() - a).cwiseAbs().maxCoeff();
  r.col_residual = (r.scaled.colwise().sum().transpose() - b)
                       .cwiseAbs()
                       .maxCoeff();
}

// Log-sum-exp down each column of e shifted by the row vector lu.
Vector lse_columns(const Matrix& e, const Vector& lu) {
  int n = static_cast<int>(e.rows());
  Vector out(e.cols());
  for (int j = 0; j < e.cols(); ++j) {
    double m = -kInf;
    for (int i = 0; i < n; ++i) m = std::max(m, e(i, j) + lu(i));
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      double t = e(i, j) + lu(i);
      if (t > -kInf) s += std::exp(t - m);
    }
    out(j) = m + std::log(s);
  }
  return out;
}

Vector lse_rows(const Matrix& e, const Vector& lv) {
  int n = static_cast<int>(e.cols());
  Vector out(e.rows());
  for (int i = 0; i < e.rows(); ++i) {
    double m = -kInf;
    for (int j = 0; j < n; ++j) m = std::max(m, e(i, j) + lv(j));
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      double t = e(i, j) + lv(j);
      if (t > -kInf) s += std::exp(t - m);
    }
    out(i) = m + std::log(s);
  }
  return out;
}

}  // namespace

SinkhornResult sinkhorn_scale(const Matrix& k, const Vector& a,
                              const Vector& b, int iters) {
  check_marginals(k, a, b);
  check_kernel_support(k);
  if (iters < 1) throw ValidationError("iters must be >= 1");
  int n = static_cast<int>(k.rows());
  Vector u = Vector::Constant(n, 1.0 / n);
  Matrix kbar = a.cwiseInverse().asDiagonal() * k;
  for (int it = 1; it <= iters; ++it) {
    Vector t = b.cwiseQuotient(k.transpose() * u);
    u = (kbar * t).cwiseInverse();
    if (!u.allFinite()) {
      throw NumericalError("non-finite scaling vector at iteration " +
                           std::to_string(it));
    }
  }
  SinkhornResult r;
  r.u = u;
  r.v = b.cwiseQuotient(k.transpose() * u);
  r.scaled = u.asDiagonal() * k * r.v.asDiagonal();
  r.log_u = u.array().log();
  r.log_v = r.v.array().log();
  r.iterations = iters;
  fill_residuals(r, a, b);
  return r;
}

SinkhornResult sinkhorn_scale_log(const Matrix& log_k, const Vector& a,
                                  const Vector& b, int iters) {
  Matrix support = (log_k.array() > -kInf).cast<double>();
  check_marginals(support, a, b);
  check_kernel_support(support);
  if (iters < 1) throw ValidationError("iters must be >= 1");
  int n = static_cast<int>(log_k.rows());
  Vector lu = Vector::Constant(n, -std::log(static_cast<double>(n)));
  Vector la = a.array().log(), lb = b.array().log();
  Vector lt;
  for (int it = 1; it <= iters; ++it) {
    lt = lb - lse_columns(log_k, lu);
    lu = la - lse_rows(log_k, lt);
    if (!lu.allFinite()) {
      throw NumericalError("non-finite log scaling at iteration " +
                           std::to_string(it));
    }
  }
  Vector lv = lb - lse_columns(log_k, lu);
  SinkhornResult r;
  r.log_u = lu;
  r.log_v = lv;
  r.u = lu.array().exp();
  r.v = lv.array().exp();
  r.scaled.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double e = lu(i) + log_k(i, j) + lv(j);
      r.scaled(i, j) = e > -kInf ? std::exp(e) : 0.0;
    }
  }
  if (!r.scaled.allFinite()) {
    throw NumericalError("non-finite scaled plan on the log path");
  }
  r.iterations = iters;
  fill_residuals(r, a, b);
  return r;
}

SinkhornResult sinkhorn_converge(const Matrix& k, const Vector& a,
                                 const Vector& b, double tol, int max_sweeps) {
  check_marginals(k, a, b);
  check_kernel_support(k);
  if (max_sweeps < 1) throw ValidationError("max_sweeps must be >= 1");
  int n = static_cast<int>(k.rows());
  Vector u = Vector::Constant(n, 1.0 / n);
  Matrix kbar = a.cwiseInverse().asDiagonal() * k;
  SinkhornResult r;
  for (int it = 1; it <= max_sweeps; ++it) {
    Vector t = b.cwiseQuotient(k.transpose() * u);
    u = (kbar * t).cwiseInverse();
    if (!u.allFinite()) {
      throw NumericalError("non-finite scaling vector at iteration " +
                           std::to_string(it));
    }
    r.u = u;
    r.v = b.cwiseQuotient(k.transpose() * u);
    r.scaled = u.asDiagonal() * k * r.v.asDiagonal();
    r.iterations = it;
    fill_residuals(r, a, b);
    if (std::max(r.row_residual, r.col_residual) <= tol) break;
  }
  r.log_u = r.u.array().log();
  r.log_v = r.v.array().log();
  return r;
}

double hilbert_metric(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw ValidationError("vector size mismatch");
  if (x.size() == 0) throw ValidationError("empty vectors");
  if (x.minCoeff() <= 0 || y.minCoeff() <= 0) {
    throw ValidationError("hilbert metric needs strictly positive entries");
  }
  Vector r = x.array().log() - y.array().log();
  return r.maxCoeff() - r.minCoeff();
}

double birkhoff_contraction(const Matrix& k) {
  int n = static_cast<int>(k.rows());
  if (k.cols() != n) throw ValidationError("kernel must be square");
  if (n > 64) throw ValidationError("contraction ratio guarded to n <= 64");
  if (k.minCoeff() <= 0) {
    throw ValidationError("contraction ratio needs strictly positive entries");
  }
  Matrix l = k.array().log();
  double h = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          h = std::max(h, l(i, p) + l(j, q) - l(j, p) - l(i, q));
        }
      }
    }
  }
  return std::tanh(h / 4.0);
}

BoundReport theorem5_bound_report(const Matrix& k, const Vector& a,
                                  const Vector& b, const Matrix& c, double eps,
                                  const Matrix& m, const Matrix& delta_prev,
                                  const Matrix& delta_new,
                                  const ScopeMask& support) {
  int n = static_cast<int>(k.rows());
  if (c.rows() != n || c.cols() != n || m.rows() != n || m.cols() != n ||
      delta_prev.rows() != n || delta_new.rows() != n ||
      support.s.rows() != n || support.s.cols() != n) {
    throw ValidationError("bound report shape mismatch");
  }
  if (eps <= 0) throw ValidationError("eps must be positive");
  BoundReport rep;
  rep.gamma = birkhoff_contraction(k);
  if (rep.gamma >= 1.0) {
    throw NumericalError("contraction ratio reached 1; bound is vacuous");
  }
  Vector r0 = k.rowwise().sum();
  Vector c0 = k.colwise().sum();
  rep.hilbert_r = hilbert_metric(r0, a);
  rep.hilbert_c = hilbert_metric(c0, b);
  rep.alpha_grid.resize(n, n);
  double diam = rep.hilbert_r + rep.hilbert_c;
  double worst_lhs = 0.0;
  double best_rhs = kInf;
  double min_slack = kInf;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double cij = c(i, j);
      rep.alpha_grid(i, j) = cij != 0 ? eps / (2.0 * cij * cij) : kInf;
      if (support.s(i, j) == 0) continue;
      if (cij == 0) {
        ++rep.skipped;
        continue;
      }
      double alpha = rep.alpha_grid(i, j);
      double lhs = std::abs(alpha * delta_new(i, j) - delta_prev(i, j));
      double rhs = alpha / (eps * eps * (1.0 - rep.gamma)) * diam +
                   alpha * (1.0 + std::abs(m(i, j)) / eps);
      ++rep.checked;
      worst_lhs = std::max(worst_lhs, lhs);
      best_rhs = std::min(best_rhs, rhs);
      min_slack = std::min(min_slack, rhs - lhs);
      if (lhs > rhs) ++rep.violations;
    }
  }
  rep.lhs = worst_lhs;
  rep.rhs = rep.checked > 0 ? best_rhs : 0.0;
  rep.min_slack = rep.checked > 0 ? min_slack : 0.0;
  rep.holds = rep.checked > 0 && rep.violations == 0;
  return rep;
}

}  // namespace spectraforge
