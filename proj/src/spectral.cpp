#include "spectraforge/spectral.hpp"

#include "spectraforge/errors.hpp"
#include "spectraforge/report.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace spectraforge {

SpectralDecomposition decompose(const Matrix& m, MatrixSource source) {
  if (m.rows() != m.cols()) throw ValidationError("matrix must be square");
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-6) {
    throw ValidationError("matrix asymmetry " + std::to_string(asym) +
                          " exceeds 1e-6");
  }
  Matrix sym = asym > 0 ? ((m + m.transpose()) / 2.0).eval() : m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed to converge");
  }
  SpectralDecomposition d;
  d.lambdas = solver.eigenvalues();
  d.u = solver.eigenvectors();
  d.source = source;
  return d;
}

Matrix eigenspace(const SpectralDecomposition& d, int i) {
  if (i < 0 || i >= d.u.cols()) {
    throw ValidationError("eigenspace index " + std::to_string(i) +
                          " out of range");
  }
  return d.u.col(i) * d.u.col(i).transpose();
}

double frobenius_inner(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw ValidationError("frobenius_inner shape mismatch");
  }
  return p.cwiseProduct(q).sum();
}

EigenShift estimate_eigenvalue_shifts(const SpectralDecomposition& d,
                                      const Matrix& delta_a,
                                      const Vector& delta_d,
                                      ShiftNormalization normalization,
                                      const Vector& base_degrees) {
  int n = static_cast<int>(d.lambdas.size());
  if (delta_a.rows() != n || delta_a.cols() != n || delta_d.size() != n) {
    throw ValidationError("perturbation shape mismatch");
  }
  if (d.source != MatrixSource::laplacian) {
    throw ValidationError("shift estimates need a Laplacian decomposition");
  }
  Vector row_sums = delta_a.rowwise().sum();
  if ((row_sums - delta_d).cwiseAbs().maxCoeff() > 1e-8) {
    throw ValidationError("delta_d inconsistent with delta_a row sums");
  }
  if (normalization == ShiftNormalization::d_normalized &&
      base_degrees.size() != n) {
    throw ValidationError("d_normalized needs the base degree vector");
  }
  EigenShift shift;
  shift.normalization = normalization;
  shift.delta_lambdas.resize(n);
  for (int i = 0; i < n; ++i) {
    Vector ui = d.u.col(i);
    double term_a = ui.dot(delta_a * ui);
    double term_d = d.lambdas(i) * ui.cwiseAbs2().dot(delta_d);
    double denom = 1.0;
    if (normalization == ShiftNormalization::d_normalized) {
      denom = ui.cwiseAbs2().dot((base_degrees + delta_d).eval());
      if (std::abs(denom) < 1e-12) {
        throw NumericalError("degenerate Rayleigh denominator at index " +
                             std::to_string(i));
      }
    }
    shift.delta_lambdas(i) = (term_a - term_d) / denom;
  }
  return shift;
}

SpectrumCurve spectrum_curve(const SpectralDecomposition& d,
                             const Vector& amplitudes, int bins) {
  int n = static_cast<int>(d.lambdas.size());
  if (amplitudes.size() != n) {
    throw ValidationError("amplitudes length mismatch");
  }
  if (bins < 2) throw ValidationError("need at least 2 bins");
  SpectrumCurve curve;
  curve.band_edges.resize(bins + 1);
  for (int k = 0; k <= bins; ++k) curve.band_edges(k) = 2.0 * k / bins;
  curve.amplitudes = Vector::Zero(bins);
  curve.counts = Eigen::VectorXi::Zero(bins);
  for (int i = 0; i < n; ++i) {
    double lam = d.lambdas(i);
    int k = static_cast<int>(std::floor(lam / 2.0 * bins));
    k = std::max(0, std::min(bins - 1, k));
    curve.amplitudes(k) += amplitudes(i);
    curve.counts(k) += 1;
  }
  for (int k = 0; k < bins; ++k) {
    if (curve.counts(k) > 0) curve.amplitudes(k) /= curve.counts(k);
  }
  return curve;
}

std::string spectrum_curve_tsv(const SpectrumCurve& c) {
  std::ostringstream out;
  out << "lambda_lo\tlambda_hi\tamplitude\tcount\n";
  for (int k = 0; k < c.amplitudes.size(); ++k) {
    out << format_g12(c.band_edges(k)) << "\t" << format_g12(c.band_edges(k + 1))
        << "\t" << format_g12(c.amplitudes(k)) << "\t" << c.counts(k) << "\n";
  }
  return out.str();
}

}  // namespace spectraforge
