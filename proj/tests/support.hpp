#pragma once

#include <random>

#include "polytoep/trunc.hpp"

namespace testing_support {

using polytoep::Complex;
using polytoep::LaurentSymbol;
using polytoep::Matrix;
using polytoep::MultiIndex;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline LaurentSymbol scalar_monomial(std::initializer_list<int> k, Complex c = 1.0) {
  return LaurentSymbol::monomial(MultiIndex(k), Matrix::Constant(1, 1, c));
}

inline Matrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  return m;
}

// Block of `big` (built at a larger degree) on the rows/cols of the small bases.
inline Matrix restrict_to(const polytoep::TruncatedOperator& big, const polytoep::Basis& rows,
                          const polytoep::Basis& cols) {
  Matrix out(rows.size(), cols.size());
  for (int i = 0; i < rows.size(); ++i) {
    int bi = big.rows->flat(big.rows->position(rows.monomial(i / rows.dim())), i % rows.dim());
    for (int j = 0; j < cols.size(); ++j) {
      int bj = big.cols->flat(big.cols->position(cols.monomial(j / cols.dim())), j % cols.dim());
      out(i, j) = big.matrix(bi, bj);
    }
  }
  return out;
}

// The three examples the product tests keep coming back to.
inline LaurentSymbol theta_example() {
  return LaurentSymbol::monomial({1}, mat({{0, 1}, {0, 0}}));
}
inline LaurentSymbol pointwise_counterexample() {
  return LaurentSymbol(1, 2, 2,
                       {{MultiIndex{1}, mat({{0.5, 0}, {0, 0}})},
                        {MultiIndex{0}, mat({{0, std::sqrt(3.0) / 2}, {0, 0}})}});
}

}  // namespace testing_support
