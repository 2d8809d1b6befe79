#pragma once

#include <vector>

#include "polytoep/trunc.hpp"

namespace polytoep {

/// Reference implementations used for cross-validation only.  They work from
/// definitions (quadrature, singular values) and share no convolution code
/// with the trunc module.

/// Entries <Phi z^l e, z^m f> by an M^n-point rectangle rule on the torus.
/// The rule is exact when M > D + d_i for every variable (d the band radius);
/// smaller M throws AliasingError.
TruncatedOperator dft_toeplitz(const LaurentSymbol& phi, const TruncationGrid& grid, int samples);

struct SvdClassification {
  bool verdict = false;
  /// Largest distance of a singular value from {0, 1}.
  double residual = 0.0;
  std::vector<double> singular_values;
  MultiIndex window;
};

/// Singular values of the block of T formed by the columns l <= W whose full
/// image lies inside the grid (W = min(exact cols, D - upward reach)).
/// Partial isometry iff all of them sit within tol of 0 or 1.  The test is
/// conclusive when T^*T commutes with the degree-W projection, which holds
/// for monomial-diagonal symbols.
SvdClassification svd_partial_isometry(const TruncatedOperator& t, double tol = 1e-9);
/// Same criterion on a plain matrix (all columns).
SvdClassification svd_partial_isometry(const Matrix& m, double tol = 1e-9);

}  // namespace polytoep
