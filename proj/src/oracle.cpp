#include "polytoep/oracle.hpp"

#include <cmath>
#include <numbers>

#include "polytoep/errors.hpp"

namespace polytoep {

TruncatedOperator dft_toeplitz(const LaurentSymbol& phi, const TruncationGrid& grid, int samples) {
  if (phi.n() != grid.n || phi.dim_out() != grid.dim_out || phi.dim_in() != grid.dim_in)
    throw DimensionMismatch("dft_toeplitz: symbol shape does not match grid");
  const int n = grid.n, d = grid.degree;
  MultiIndex band = phi.band_radius();
  for (int i = 0; i < n; ++i)
    if (samples <= d + band[i])
      throw AliasingError("dft_toeplitz: " + std::to_string(samples) +
                          " samples per variable alias; need more than " +
                          std::to_string(d + band[i]));

  // Sample Phi on the M^n grid of the torus.
  const int m = samples;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= m;
  std::vector<Matrix> values;
  std::vector<std::vector<int>> nodes;
  values.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t s = 0; s < total; ++s) {
    Point z(n);
    for (int i = 0; i < n; ++i) z[i] = std::polar(1.0, 2.0 * std::numbers::pi * idx[i] / m);
    values.push_back(eval(phi, z));
    nodes.push_back(idx);
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }

  // Fourier coefficient for every difference m - l in [-D, D]^n.
  BasisPtr diffs = make_basis(n, d, 1, BasisKind::Coanalytic);
  BasisPtr rb = grid.row_basis();
  BasisPtr cb = grid.col_basis();
  auto coefficient = [&](const MultiIndex& k) {
    Matrix acc = Matrix::Zero(grid.dim_out, grid.dim_in);
    for (std::size_t s = 0; s < total; ++s) {
      int phase = 0;
      for (int i = 0; i < n; ++i) phase += k[i] * nodes[s][i];
      phase %= m;
      acc += std::polar(1.0, -2.0 * std::numbers::pi * phase / m) * values[s];
    }
    return Matrix(acc / static_cast<double>(total));
  };
  std::vector<Matrix> hat_co(diffs->monomial_count());
  for (int p = 0; p < diffs->monomial_count(); ++p) hat_co[p] = coefficient(diffs->monomial(p));
  std::vector<Matrix> hat_an(rb->monomial_count());
  for (int p = 0; p < rb->monomial_count(); ++p) hat_an[p] = coefficient(rb->monomial(p));

  Matrix out = Matrix::Zero(rb->size(), cb->size());
  for (int pm = 0; pm < rb->monomial_count(); ++pm)
    for (int pl = 0; pl < cb->monomial_count(); ++pl) {
      MultiIndex k = rb->monomial(pm) - cb->monomial(pl);
      const Matrix& c = k.is_nonnegative() ? hat_an[rb->position(k)] : hat_co[diffs->position(k)];
      out.block(pm * grid.dim_out, pl * grid.dim_in, grid.dim_out, grid.dim_in) = c;
    }
  // Round-off fills the zero blocks, so the band comes from the support.
  TruncatedOperator t = operator_from_matrix(out, rb, cb, "dft[symbol]");
  t.reach_up = phi.upward_reach();
  t.reach_down = phi.downward_reach();
  return t;
}

SvdClassification svd_partial_isometry(const Matrix& m, double tol) {
  SvdClassification out;
  if (m.size() > 0) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    for (int i = 0; i < s.size(); ++i) {
      out.singular_values.push_back(s[i]);
      out.residual = std::max(out.residual, std::min(std::abs(s[i]), std::abs(s[i] - 1.0)));
    }
  }
  out.verdict = out.residual <= tol;
  return out;
}

SvdClassification svd_partial_isometry(const TruncatedOperator& t, double tol) {
  MultiIndex w = cwise_min(t.exact_cols, MultiIndex::filled(t.n(), t.degree()) - t.reach_up);
  require_window(w, t.degree(), "svd_partial_isometry");
  std::vector<int> cols = window_indices(*t.cols, w);
  Matrix block = t.matrix(Eigen::placeholders::all, cols);
  SvdClassification out = svd_partial_isometry(block, tol);
  out.window = w;
  return out;
}

}  // namespace polytoep
