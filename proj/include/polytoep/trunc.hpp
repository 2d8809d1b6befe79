#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "polytoep/report.hpp"
#include "polytoep/symbol.hpp"

namespace polytoep {

/// Analytic: monomials k in [0, D]^n (a finite section of H^2).
/// Coanalytic: k in [-D, D]^n with some k_i < 0 (a finite section of the
/// orthocomplement of H^2 in L^2); used for Hankel rows.
enum class BasisKind { Analytic, Coanalytic };

/// Enumeration of monomials times fiber vectors.  Monomials are ordered by
/// total degree, ties broken by larger exponent of z_1 first, then z_2, and
/// so on (for Coanalytic by sum of |k_i| instead).  The flat index of
/// (monomial position p, fiber e) is p * dim + e.
class Basis {
 public:
  Basis(int n, int degree, int dim, BasisKind kind = BasisKind::Analytic);

  int n() const { return n_; }
  int degree() const { return degree_; }
  int dim() const { return dim_; }
  BasisKind kind() const { return kind_; }
  int monomial_count() const { return static_cast<int>(monomials_.size()); }
  int size() const { return monomial_count() * dim_; }

  const MultiIndex& monomial(int position) const { return monomials_[position]; }
  /// Position of k, or -1 when k is not in this basis.
  int position(const MultiIndex& k) const;
  int flat(int position, int fiber) const { return position * dim_ + fiber; }
  /// Human-readable label of a flat index, e.g. "z^(1,0) e2".
  std::string label(int flat_index) const;

  bool operator==(const Basis& o) const {
    return n_ == o.n_ && degree_ == o.degree_ && dim_ == o.dim_ && kind_ == o.kind_;
  }

 private:
  int n_, degree_, dim_;
  BasisKind kind_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> lookup_;  // mixed-radix box index -> position or -1
  int offset_, radix_;
};

using BasisPtr = std::shared_ptr<const Basis>;
BasisPtr make_basis(int n, int degree, int dim, BasisKind kind = BasisKind::Analytic);

/// Finite model of H^2_F(D^n) -> H^2_E(D^n): uniform degree cap per variable.
struct TruncationGrid {
  int n = 1;
  int degree = 8;
  int dim_out = 1;
  int dim_in = 1;

  BasisPtr row_basis() const { return make_basis(n, degree, dim_out); }
  BasisPtr col_basis() const { return make_basis(n, degree, dim_in); }
  static TruncationGrid for_symbol(const LaurentSymbol& phi, int degree) {
    return {phi.n(), degree, phi.dim_out(), phi.dim_in()};
  }
};

/// Dense matrix of an operator on truncated bases, with the bookkeeping that
/// says which entries agree with the untruncated operator.
///
/// reach_up / reach_down: the operator maps z^l into span{z^m : l - reach_down
/// <= m <= l + reach_up}.  exact_rows R / exact_cols C: entry (m, l) equals
/// the true entry whenever m <= R or l <= C (componentwise).
struct TruncatedOperator {
  Matrix matrix;
  BasisPtr rows;
  BasisPtr cols;
  MultiIndex reach_up;
  MultiIndex reach_down;
  MultiIndex exact_rows;
  MultiIndex exact_cols;
  std::string provenance;

  int n() const { return rows->n(); }
  int degree() const { return rows->degree(); }
  /// Componentwise max of upward and downward reach.
  MultiIndex band_radius() const { return cwise_max(reach_up, reach_down); }
  /// Column window on which the full column is exact.
  const MultiIndex& window() const { return exact_cols; }

  TruncatedOperator adjoint() const;
  TruncatedOperator scaled(Complex s) const;
  TruncatedOperator operator+(const TruncatedOperator& o) const;
  TruncatedOperator operator-(const TruncatedOperator& o) const;
  TruncatedOperator operator*(const TruncatedOperator& o) const;
};

/// Block (m, l) = Phi^(m - l).
TruncatedOperator toeplitz_matrix(const LaurentSymbol& phi, const TruncationGrid& grid);
inline TruncatedOperator toeplitz_matrix(const LaurentSymbol& phi, int degree) {
  return toeplitz_matrix(phi, TruncationGrid::for_symbol(phi, degree));
}

/// M_{z_i} on the given analytic basis (variable i is 0-based).
TruncatedOperator shift_matrix(int i, const BasisPtr& basis);
/// M_{z_i} on the grid's input side.
TruncatedOperator mult_shift_matrix(int i, const TruncationGrid& grid);

TruncatedOperator identity_operator(const BasisPtr& basis);

/// Un-rotated Hankel operator P_{(H^2)^perp} L_Phi restricted to H^2:
/// rows are the coanalytic box, block (q, l) = Phi^(q - l).
TruncatedOperator hankel_matrix(const LaurentSymbol& phi, const TruncationGrid& grid);

/// Wrap a user-supplied matrix on the given bases.  The band is read off the
/// nonzero pattern and every entry is taken as exact.
TruncatedOperator operator_from_matrix(const Matrix& m, BasisPtr rows, BasisPtr cols,
                                       std::string provenance = "matrix");

struct ComposeFactor {
  const TruncatedOperator* op;
  bool adjoint = false;
};

/// Product of the factors left to right, with reaches summed and the exact
/// region updated.  Sparse factors are multiplied in sparse form.
TruncatedOperator compose(const std::vector<ComposeFactor>& factors);
TruncatedOperator compose(const TruncatedOperator& x, const TruncatedOperator& y);
/// Bookkeeping of compose(x, y) (reaches, exact rows and columns) with an
/// empty matrix.
TruncatedOperator compose_bounds(const TruncatedOperator& x, const TruncatedOperator& y);

/// Max-entry norm of X - Y over all rows and the columns whose monomial is
/// <= window.  Throws WindowExhausted when the window has a negative entry.
VerificationReport compare_on_window(const TruncatedOperator& x, const TruncatedOperator& y,
                                     const MultiIndex& window, double tol,
                                     const std::string& check = "compare");
/// Uses the largest window on which both X and Y are exact.
VerificationReport compare_on_window(const TruncatedOperator& x, const TruncatedOperator& y,
                                     double tol, const std::string& check = "compare");

/// Columns of X whose monomial is <= window (flat indices in basis order).
std::vector<int> window_indices(const Basis& basis, const MultiIndex& window);
/// Rows and columns both restricted to the window.
Matrix principal_block(const TruncatedOperator& x, const MultiIndex& window);
/// Throws WindowExhausted if any entry of the window is negative.
void require_window(const MultiIndex& window, int degree, const std::string& what);

/// Row-major dense text dump, one row per line of "re im" pairs.
void write_matrix_text(std::ostream& os, const Matrix& m);

}  // namespace polytoep
