#pragma once

#include "spectraforge/graph.hpp"

#include <string>

namespace spectraforge {

enum class MatrixSource { laplacian, adjacency, custom };

// Full symmetric eigendecomposition, eigenvalues ascending, columns of u
// orthonormal.
struct SpectralDecomposition {
  Vector lambdas;
  Matrix u;
  MatrixSource source = MatrixSource::custom;
};

// Amplitudes phi(lambda) averaged over frequency bins spanning [0, 2].
// Bins are inclusive-left; the last bin is also inclusive-right.
struct SpectrumCurve {
  Vector band_edges;
  Vector amplitudes;
  Eigen::VectorXi counts;
};

enum class ShiftNormalization { paper_literal, d_normalized };

// First-order estimates of eigenvalue movement under a structural change.
struct EigenShift {
  Vector delta_lambdas;
  ShiftNormalization normalization = ShiftNormalization::paper_literal;
};

inline constexpr int kDefaultSpectrumBins = 20;

// Symmetrizes input when the asymmetry is below 1e-10; errors past 1e-6.
SpectralDecomposition decompose(const Matrix& m, MatrixSource source);

// Rank-one projector u_i u_i^T for frequency lambda_i.
Matrix eigenspace(const SpectralDecomposition& d, int i);

// Sum of the elementwise product of two equally shaped matrices.
double frobenius_inner(const Matrix& p, const Matrix& q);

// Per-eigenpair shift estimate u_i^T dA u_i - lambda_i u_i^T diag(dd) u_i.
// d_normalized divides each term by u_i^T (D + dD) u_i and needs the base
// degree vector; paper_literal ignores base_degrees and may be called with
// an empty vector. delta_d must equal the row sums of delta_a within 1e-8.
EigenShift estimate_eigenvalue_shifts(const SpectralDecomposition& d,
                                      const Matrix& delta_a,
                                      const Vector& delta_d,
                                      ShiftNormalization normalization,
                                      const Vector& base_degrees = Vector());

// Bins amplitudes (aligned to d.lambdas) over [0, 2]; empty bins carry
// amplitude 0 and count 0.
SpectrumCurve spectrum_curve(const SpectralDecomposition& d,
                             const Vector& amplitudes,
                             int bins = kDefaultSpectrumBins);

// TSV with header "lambda_lo\tlambda_hi\tamplitude\tcount", one row per bin.
std::string spectrum_curve_tsv(const SpectrumCurve& c);

}  // namespace spectraforge
