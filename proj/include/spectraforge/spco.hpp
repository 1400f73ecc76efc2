#pragma once

#include "spectraforge/game_rule.hpp"
#include "spectraforge/graph.hpp"
#include "spectraforge/report.hpp"
#include "spectraforge/transport.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace spectraforge {

enum class MarginalMode { degree, degree_normalized, uniform };

// Spectral profile of the cost matrix: theta * L, theta * (I + L), or
// theta * (I + L + L^2). Only the plain Laplacian profile is tuned; the
// others exist for comparison runs.
enum class CostKind { laplacian, identity_plus_laplacian, identity_plus_laplacian_sq };

struct SpcoConfig {
  double theta_final = 0.02;  // curriculum endpoint
  int total_epochs = 10;
  int update_epochs = 1;  // plans refreshed when epoch % update_epochs == 0
  double eps = 1e-2;
  double eta = 0.5;
  int hops = 1;
  int iters = 3;  // scaling sweeps per plan solve
  MarginalMode marginal_mode = MarginalMode::degree;
  CostKind cost_kind = CostKind::laplacian;
  std::uint64_t seed = 0;
};

struct CostMatrix {
  Matrix c;
  double theta = 0.0;
};

// Plan pair for one epoch. prev_* hold exactly the plans the kernels of this
// epoch were built from.
struct DeltaPlan {
  Matrix delta_plus;
  Matrix delta_minus;
  Matrix prev_plus;
  Matrix prev_minus;
  int epoch = 0;
  double theta = 0.0;
  double match_plus = 0.0;   // <C, delta_plus>
  double match_minus = 0.0;  // <C, delta_minus>
  double row_residual_plus = 0.0;
  double col_residual_plus = 0.0;
  double row_residual_minus = 0.0;
  double col_residual_minus = 0.0;
};

struct SpcoTraceRow {
  int epoch = 0;
  double theta = 0.0;
  double match_plus = 0.0;
  double match_minus = 0.0;
  double row_residual_plus = 0.0;
  double col_residual_plus = 0.0;
  double row_residual_minus = 0.0;
  double col_residual_minus = 0.0;
  double game_margin = 0.0;
};

struct SpcoResult {
  Matrix a_combined;
  DeltaPlan final_plan;
  std::vector<SpcoTraceRow> trace;
};

// JSON array with one object per trace row, keyed by the field names.
Json trace_json(const std::vector<SpcoTraceRow>& trace);

enum class PlanSign { plus, minus };

enum class Feasibility { condition1, condition2, infeasible };

// (t / total) * theta_final.
double theta_schedule(int t, int total, double theta_final);

// Entrywise theta-scaled spectral profile of lap.
CostMatrix build_cost(const Matrix& lap, double theta,
                      CostKind kind = CostKind::laplacian);

// Exponent E = sign * 2 <C, delta_prev> C / eps of the scaling kernel.
Matrix kernel_exponent(const CostMatrix& c, const Matrix& delta_prev,
                       double eps, PlanSign sign);

// exp(E) elementwise; NumericalError when max |E| > 500 (callers on the
// solve path switch to log-domain scaling instead).
Matrix build_kernel(const CostMatrix& c, const Matrix& delta_prev, double eps,
                    PlanSign sign);

// Rank-one initial plan a b^T / sum(b); satisfies both marginals.
Matrix initial_plan(const Vector& a, const Vector& b);

// Marginal pair (a, b) for the plan solves. degree errors on isolated
// nodes; degree_normalized rescales to total mass n; uniform is all-ones.
std::pair<Vector, Vector> marginals(const Graph& g, MarginalMode mode);

// One plan refresh: kernels from plan.delta_*, cfg.iters scaling sweeps per
// sign (log-domain when the exponent guard trips), incoming plans rolled
// into prev_*.
DeltaPlan spco_epoch(const DeltaPlan& plan, const CostMatrix& cost,
                     const SpcoConfig& cfg, const Vector& a, const Vector& b);

// A + eta * (mask .* (delta_plus - delta_minus)), symmetrized and clamped at
// zero. Off-mask entries equal A exactly.
Matrix combine_view(const Graph& g, const DeltaPlan& plan, double eta,
                    const ScopeMask& mask);

// J = <C,D>^2 + eps H(D) + <f, D1 - a> + <g, D^T 1 - b> with
// H(P) = -sum P_ij (log P_ij - 1); zero entries contribute 0 to H, negative
// entries are a ValidationError.
double objective_value(const Matrix& delta, const CostMatrix& c, double eps,
                       const Vector& f, const Vector& g, const Vector& a,
                       const Vector& b);

// m_ij = 2 <C, delta_prev> C_ij - 2 C_ij^2 (delta_prev)_ij.
Matrix m_matrix(const CostMatrix& c, const Matrix& delta_prev);

// Existence test for a stationary point of the per-entry objective:
//   condition1 iff C^2 < -(f+g+m)/2         and f+g+m < 0
//   condition2 iff eps/2 < C^2 < (eps/2) exp(-(f+g+m+eps)/2)
//                                           and f+g+m+eps < 0
// condition1 takes precedence where both hold.
Feasibility theorem4_feasibility(double c_ij, double f_i, double g_j,
                                 double m_ij, double eps);

// Stationarity residual m + 2 C^2 delta - eps log(delta) + f + g whose root
// in (0,1) the feasibility conditions guarantee.
double stationarity_value(double c_ij, double f_i, double g_j, double m_ij,
                          double eps, double delta);

// Full curriculum run; the trace has one row per epoch, game_margin measured
// between the input spectrum and the perturbation-estimated spectrum of the
// combined view.
SpcoResult run_spco(const Graph& g, const SpcoConfig& cfg);

}  // namespace spectraforge
