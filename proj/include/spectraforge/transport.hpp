#pragma once

#include "spectraforge/graph.hpp"

namespace spectraforge {

// Output of entropy-regularized matrix scaling. scaled = diag(u) K diag(v);
// log_u/log_v are always populated (the log-domain path may produce u or v
// whose exp over/underflows while scaled itself stays finite).
struct SinkhornResult {
  Matrix scaled;
  Vector u;
  Vector v;
  Vector log_u;
  Vector log_v;
  int iterations = 0;
  double row_residual = 0.0;
  double col_residual = 0.0;
};

// Per-entry audit of the scaling-sensitivity bound
//   |alpha (D+)_ij - (D+')_ij| <= alpha/(eps^2 (1-gamma)) {d(r0,a)+d(c0,b)}
//                                 + alpha (1 + |m_ij|/eps),  alpha = eps/(2 C_ij^2).
struct BoundReport {
  double lhs = 0.0;        // max |alpha (D+)_ij - (D+')_ij| over checked support
  double rhs = 0.0;        // min right-hand side over checked support
  double min_slack = 0.0;  // min (rhs_ij - lhs_ij)
  Matrix alpha_grid;       // eps/(2 C_ij^2); +inf where C_ij = 0
  double gamma = 0.0;
  double hilbert_r = 0.0;
  double hilbert_c = 0.0;
  int checked = 0;
  int skipped = 0;  // support entries with C_ij = 0
  int violations = 0;
  bool holds = false;
};

// Fixed-count scaling sweeps:
//   u = (1/N,...), Kbar = diag(1/a) K,
//   repeat iters times: u <- 1 ./ (Kbar (b ./ (K^T u))),
//   then v = b ./ (K^T u), result diag(u) K diag(v).
// Requires sum(a) = sum(b) within 1e-6 relative; K entries positive, or
// exactly zero provided every row and column keeps a positive entry (zeros
// are preserved through scaling). Residuals are reported, not enforced.
SinkhornResult sinkhorn_scale(const Matrix& k, const Vector& a,
                              const Vector& b, int iters);

// Same iteration carried out on log_k in the log domain (entries may be
// -inf for masked zeros). Agrees with sinkhorn_scale within 1e-10 wherever
// both paths are finite.
SinkhornResult sinkhorn_scale_log(const Matrix& log_k, const Vector& a,
                                  const Vector& b, int iters);

// Sweeps until max(row, col) residual <= tol or max_sweeps is exhausted.
SinkhornResult sinkhorn_converge(const Matrix& k, const Vector& a,
                                 const Vector& b, double tol, int max_sweeps);

// d(x, y) = log max_{i,k} (x_i y_k)/(y_i x_k) on strictly positive vectors.
double hilbert_metric(const Vector& x, const Vector& y);

// Contraction ratio kappa(K) = (sqrt(aleph)-1)/(sqrt(aleph)+1) with
// aleph = max_{i,j,k,l} (K_ik K_jl)/(K_jk K_il). O(n^4); guarded to n <= 64.
double birkhoff_contraction(const Matrix& k);

// Evaluates the bound above on every support entry; entries with C_ij = 0
// are skipped and counted. Errors when the contraction ratio reaches 1.
BoundReport theorem5_bound_report(const Matrix& k, const Vector& a,
                                  const Vector& b, const Matrix& c, double eps,
                                  const Matrix& m, const Matrix& delta_prev,
                                  const Matrix& delta_new,
                                  const ScopeMask& support);

}  // namespace spectraforge
