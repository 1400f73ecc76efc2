#include "spectraforge/spco.hpp"

#include "spectraforge/errors.hpp"
#include "spectraforge/spectral.hpp"

#include <cmath>
#include <string>

namespace spectraforge {

double theta_schedule(int t, int total, double theta_final) {
  if (total < 1) throw ValidationError("total epochs must be >= 1");
  if (t < 0 || t > total) throw ValidationError("epoch outside [0, total]");
  return (static_cast<double>(t) / total) * theta_final;
}

CostMatrix build_cost(const Matrix& lap, double theta, CostKind kind) {
  if (!std::isfinite(theta)) throw ValidationError("non-finite theta");
  if (lap.rows() != lap.cols()) throw ValidationError("lap must be square");
  Matrix id = Matrix::Identity(lap.rows(), lap.cols());
  CostMatrix cost;
  cost.theta = theta;
  switch (kind) {
    case CostKind::laplacian:
      cost.c = theta * lap;
      break;
    case CostKind::identity_plus_laplacian:
      cost.c = theta * (id + lap);
      break;
    case CostKind::identity_plus_laplacian_sq:
      cost.c = theta * (id + lap + lap * lap);
      break;
  }
  return cost;
}

Matrix kernel_exponent(const CostMatrix& c, const Matrix& delta_prev,
                       double eps, PlanSign sign) {
  if (eps <= 0) throw ValidationError("eps must be positive");
  double match = frobenius_inner(c.c, delta_prev);
  double direction = sign == PlanSign::plus ? 1.0 : -1.0;
  return (direction * 2.0 * match / eps) * c.c;
}

Matrix build_kernel(const CostMatrix& c, const Matrix& delta_prev, double eps,
                    PlanSign sign) {
  Matrix e = kernel_exponent(c, delta_prev, eps, sign);
  double peak = e.cwiseAbs().maxCoeff();
  if (peak > 500.0) {
    throw NumericalError("kernel exponent magnitude " + std::to_string(peak) +
                         " exceeds the overflow guard");
  }
  return e.array().exp().matrix();
}

Matrix initial_plan(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ValidationError("marginal size mismatch");
  double total = b.sum();
  if (total <= 0) throw ValidationError("marginal mass must be positive");
  return a * b.transpose() / total;
}

std::pair<Vector, Vector> marginals(const Graph& g, MarginalMode mode) {
  Vector d = degrees(g);
  switch (mode) {
    case MarginalMode::degree:
      if (d.minCoeff() <= 0) {
        throw ValidationError(
            "degree marginals need every node to have an edge");
      }
      return {d, d};
    case MarginalMode::degree_normalized: {
      double total = d.sum();
      if (total <= 0) throw ValidationError("graph has no edges");
      Vector scaled = d * (g.n / total);
      return {scaled, scaled};
    }
    case MarginalMode::uniform: {
      Vector ones = Vector::Ones(g.n);
      return {ones, ones};
    }
  }
  throw ValidationError("unknown marginal mode");
}

DeltaPlan spco_epoch(const DeltaPlan& plan, const CostMatrix& cost,
                     const SpcoConfig& cfg, const Vector& a, const Vector& b) {
  Matrix e_plus = kernel_exponent(cost, plan.delta_plus, cfg.eps,
                                  PlanSign::plus);
  Matrix e_minus = kernel_exponent(cost, plan.delta_minus, cfg.eps,
                                   PlanSign::minus);
  double peak =
      std::max(e_plus.cwiseAbs().maxCoeff(), e_minus.cwiseAbs().maxCoeff());
  SinkhornResult plus, minus;
  if (peak > 500.0) {
    plus = sinkhorn_scale_log(e_plus, a, b, cfg.iters);
    minus = sinkhorn_scale_log(e_minus, a, b, cfg.iters);
  } else {
    plus = sinkhorn_scale(e_plus.array().exp().matrix(), a, b, cfg.iters);
    minus = sinkhorn_scale(e_minus.array().exp().matrix(), a, b, cfg.iters);
  }
  DeltaPlan out;
  out.delta_plus = plus.scaled;
  out.delta_minus = minus.scaled;
  out.prev_plus = plan.delta_plus;
  out.prev_minus = plan.delta_minus;
  out.epoch = plan.epoch + 1;
  out.theta = cost.theta;
  out.match_plus = frobenius_inner(cost.c, out.delta_plus);
  out.match_minus = frobenius_inner(cost.c, out.delta_minus);
  out.row_residual_plus = plus.row_residual;
  out.col_residual_plus = plus.col_residual;
  out.row_residual_minus = minus.row_residual;
  out.col_residual_minus = minus.col_residual;
  return out;
}

Matrix combine_view(const Graph& g, const DeltaPlan& plan, double eta,
                    const ScopeMask& mask) {
  Matrix a = adjacency(g);
  if (mask.s.rows() != a.rows() || mask.s.cols() != a.cols() ||
      plan.delta_plus.rows() != a.rows()) {
    throw ValidationError("combine_view shape mismatch");
  }
  Matrix combined =
      a + eta * mask.s.cwiseProduct(plan.delta_plus - plan.delta_minus);
  combined = ((combined + combined.transpose()) / 2.0).eval();
  return combined.cwiseMax(0.0);
}

double objective_value(const Matrix& delta, const CostMatrix& c, double eps,
                       const Vector& f, const Vector& g, const Vector& a,
                       const Vector& b) {
  int n = static_cast<int>(delta.rows());
  if (c.c.rows() != n || c.c.cols() != delta.cols() || f.size() != n ||
      g.size() != delta.cols() || a.size() != n || b.size() != delta.cols()) {
    throw ValidationError("objective shape mismatch");
  }
  double entropy = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < delta.cols(); ++j) {
      double p = delta(i, j);
      if (p < 0) {
        throw ValidationError("negative plan entry at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
      }
      if (p > 0) entropy -= p * (std::log(p) - 1.0);
    }
  }
  double match = frobenius_inner(c.c, delta);
  double row_pen = f.dot(delta.rowwise().sum() - a);
  double col_pen = g.dot(delta.colwise().sum().transpose() - b);
  return match * match + eps * entropy + row_pen + col_pen;
}

Matrix m_matrix(const CostMatrix& c, const Matrix& delta_prev) {
  double match = frobenius_inner(c.c, delta_prev);
  return 2.0 * match * c.c -
         2.0 * c.c.cwiseAbs2().cwiseProduct(delta_prev);
}

Feasibility theorem4_feasibility(double c_ij, double f_i, double g_j,
                                 double m_ij, double eps) {
  if (eps <= 0) throw ValidationError("eps must be positive");
  double s = f_i + g_j + m_ij;
  double c2 = c_ij * c_ij;
  if (c2 < -s / 2.0 && s < 0.0) return Feasibility::condition1;
  if (eps / 2.0 < c2 && c2 < (eps / 2.0) * std::exp(-(s + eps) / 2.0) &&
      s + eps < 0.0) {
    return Feasibility::condition2;
  }
  return Feasibility::infeasible;
}

double stationarity_value(double c_ij, double f_i, double g_j, double m_ij,
                          double eps, double delta) {
  if (delta <= 0) throw ValidationError("stationarity needs delta > 0");
  return m_ij + 2.0 * c_ij * c_ij * delta - eps * std::log(delta) + f_i + g_j;
}

SpcoResult run_spco(const Graph& g, const SpcoConfig& cfg) {
  if (cfg.total_epochs < 1) throw ValidationError("total_epochs must be >= 1");
  if (cfg.update_epochs < 1) {
    throw ValidationError("update_epochs must be >= 1");
  }
  auto [a, b] = marginals(g, cfg.marginal_mode);
  Matrix lap = normalized_laplacian(g);
  ScopeMask mask = scope_mask(g, cfg.hops);
  SpectralDecomposition dec = decompose(lap, MatrixSource::laplacian);
  Vector base_amp = Vector::Ones(g.n) - dec.lambdas;
  Matrix adj = adjacency(g);
  SpectrumCurve base_curve = spectrum_curve(dec, base_amp);

  DeltaPlan plan;
  plan.delta_plus = plan.delta_minus = initial_plan(a, b);
  plan.prev_plus = plan.delta_plus;
  plan.prev_minus = plan.delta_minus;

  SpcoResult result;
  for (int t = 1; t <= cfg.total_epochs; ++t) {
    if (t % cfg.update_epochs == 0) {
      double theta = theta_schedule(t, cfg.total_epochs, cfg.theta_final);
      CostMatrix cost = build_cost(lap, theta, cfg.cost_kind);
      plan = spco_epoch(plan, cost, cfg, a, b);
      plan.epoch = t;
    }
    SpcoTraceRow row;
    row.epoch = t;
    row.theta = plan.theta;
    row.match_plus = plan.match_plus;
    row.match_minus = plan.match_minus;
    row.row_residual_plus = plan.row_residual_plus;
    row.col_residual_plus = plan.col_residual_plus;
    row.row_residual_minus = plan.row_residual_minus;
    row.col_residual_minus = plan.col_residual_minus;

    Matrix combined = combine_view(g, plan, cfg.eta, mask);
    Matrix delta_a = combined - adj;
    Vector delta_d = delta_a.rowwise().sum();
    EigenShift shift = estimate_eigenvalue_shifts(
        dec, delta_a, delta_d, ShiftNormalization::paper_literal);
    SpectrumCurve pert_curve =
        spectrum_curve(dec, base_amp + shift.delta_lambdas);
    row.game_margin = game_margin(base_curve, pert_curve).margin;
    result.trace.push_back(row);
  }
  result.a_combined = combine_view(g, plan, cfg.eta, mask);
  result.final_plan = plan;
  return result;
}

Json trace_json(const std::vector<SpcoTraceRow>& trace) {
  Json rows = Json::array();
  for (const SpcoTraceRow& t : trace) {
    Json row;
    row["epoch"] = t.epoch;
    row["theta"] = t.theta;
    row["match_plus"] = t.match_plus;
    row["match_minus"] = t.match_minus;
    row["row_residual_plus"] = t.row_residual_plus;
    row["col_residual_plus"] = t.col_residual_plus;
    row["row_residual_minus"] = t.row_residual_minus;
    row["col_residual_minus"] = t.col_residual_minus;
    row["game_margin"] = t.game_margin;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace spectraforge
