#include "polytoep/trunc.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

// Below this fill ratio a factor is multiplied in sparse form.
constexpr double kSparseFill = 0.15;

bool graded_before(const MultiIndex& a, const MultiIndex& b, bool absolute) {
  int da = 0, db = 0;
  for (int i = 0; i < a.size(); ++i) {
    da += absolute ? std::abs(a[i]) : a[i];
    db += absolute ? std::abs(b[i]) : b[i];
  }
  if (da != db) return da < db;
  return b < a;  // larger leading exponents first
}

void require_same(const Basis& a, const Basis& b, const std::string& what) {
  if (!(a == b))
    throw DimensionMismatch(what + ": basis mismatch (n " + std::to_string(a.n()) + "/" +
                            std::to_string(b.n()) + ", D " + std::to_string(a.degree()) + "/" +
                            std::to_string(b.degree()) + ", dim " + std::to_string(a.dim()) +
                            "/" + std::to_string(b.dim()) + ")");
}

double fill_ratio(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::Index nnz = 0;
  const Complex* p = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (p[i] != Complex(0.0)) ++nnz;
  return static_cast<double>(nnz) / static_cast<double>(m.size());
}

Matrix product(const Matrix& a, const Matrix& b) {
  bool sa = fill_ratio(a) < kSparseFill;
  bool sb = fill_ratio(b) < kSparseFill;
  if (sa && sb) {
    SparseMatrix x = a.sparseView();
    SparseMatrix y = b.sparseView();
    SparseMatrix z = x * y;
    return Matrix(z);
  }
  if (sa) {
    SparseMatrix x = a.sparseView();
    return x * b;
  }
  if (sb) {
    SparseMatrix y = b.sparseView();
    return a * y;
  }
  Matrix out = a * b;
  return out;
}

MultiIndex sub_from(int d, const MultiIndex& k) {
  MultiIndex r = k;
  for (int i = 0; i < r.size(); ++i) r[i] = d - k[i];
  return r;
}

}  // namespace

Basis::Basis(int n, int degree, int dim, BasisKind kind)
    : n_(n), degree_(degree), dim_(dim), kind_(kind) {
  if (n < 1 || n > 16) throw DimensionMismatch("basis: n must be in [1, 16]");
  if (degree < 0) throw DimensionMismatch("basis: negative degree");
  if (dim < 1) throw DimensionMismatch("basis: fiber dimension must be >= 1");
  bool co = kind == BasisKind::Coanalytic;
  offset_ = co ? degree : 0;
  radix_ = co ? 2 * degree + 1 : degree + 1;
  std::size_t box = 1;
  for (int i = 0; i < n; ++i) box *= static_cast<std::size_t>(radix_);
  if (box > 50'000'000) throw DimensionMismatch("basis: grid too large");
  MultiIndex k = MultiIndex::filled(n, -offset_);
  for (std::size_t c = 0; c < box; ++c) {
    if (co != k.is_nonnegative()) monomials_.push_back(k);
    for (int i = 0; i < n; ++i) {
      if (++k[i] <= degree) break;
      k[i] = -offset_;
    }
  }
  std::sort(monomials_.begin(), monomials_.end(),
            [co](const MultiIndex& a, const MultiIndex& b) { return graded_before(a, b, co); });
  lookup_.assign(box, -1);
  for (int p = 0; p < monomial_count(); ++p) {
    std::size_t idx = 0;
    for (int i = n - 1; i >= 0; --i) idx = idx * radix_ + (monomials_[p][i] + offset_);
    lookup_[idx] = p;
  }
}

int Basis::position(const MultiIndex& k) const {
  if (k.size() != n_) return -1;
  std::size_t idx = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    int v = k[i] + offset_;
    if (v < 0 || v >= radix_) return -1;
    idx = idx * radix_ + v;
  }
  return lookup_[idx];
}

std::string Basis::label(int flat_index) const {
  return "z^" + monomial(flat_index / dim_).to_string() + "[e" +
         std::to_string(flat_index % dim_ + 1) + "]";
}

BasisPtr make_basis(int n, int degree, int dim, BasisKind kind) {
  return std::make_shared<const Basis>(n, degree, dim, kind);
}

TruncatedOperator TruncatedOperator::adjoint() const {
  return {matrix.adjoint(), cols,       rows,       reach_down,
          reach_up,         exact_cols, exact_rows, "(" + provenance + ")^*"};
}

TruncatedOperator TruncatedOperator::scaled(Complex s) const {
  TruncatedOperator r = *this;
  r.matrix *= s;
  return r;
}

TruncatedOperator TruncatedOperator::operator+(const TruncatedOperator& o) const {
  require_same(*rows, *o.rows, "operator +");
  require_same(*cols, *o.cols, "operator +");
  return {matrix + o.matrix,
          rows,
          cols,
          cwise_max(reach_up, o.reach_up),
          cwise_max(reach_down, o.reach_down),
          cwise_min(exact_rows, o.exact_rows),
          cwise_min(exact_cols, o.exact_cols),
          provenance + " + " + o.provenance};
}

TruncatedOperator TruncatedOperator::operator-(const TruncatedOperator& o) const {
  TruncatedOperator r = *this + o.scaled(-1.0);
  r.matrix = matrix - o.matrix;
  r.provenance = provenance + " - " + o.provenance;
  return r;
}

TruncatedOperator TruncatedOperator::operator*(const TruncatedOperator& o) const {
  return compose(*this, o);
}

TruncatedOperator compose_bounds(const TruncatedOperator& x, const TruncatedOperator& y) {
  require_same(*x.cols, *y.rows, "compose");
  const int d = x.degree();
  const int n = x.n();
  const bool co_middle = y.rows->kind() == BasisKind::Coanalytic;

  // Column l of XY is exact when Y's column stays inside the grid, Y's
  // entries on it are exact, and X's columns it touches are exact.
  MultiIndex c = cwise_min(sub_from(d, y.reach_up),
                           cwise_min(cwise_max(y.exact_cols, y.exact_rows - y.reach_up),
                                     x.exact_cols - y.reach_up));
  // Row m of XY symmetrically through X's rows.
  MultiIndex r = cwise_min(sub_from(d, x.reach_down),
                           cwise_min(cwise_max(x.exact_rows, x.exact_cols - x.reach_down),
                                     y.exact_rows - x.reach_down));
  if (co_middle) {
    // The coanalytic box is also bounded below by -D.
    for (int i = 0; i < n; ++i) {
      if (y.reach_down[i] > d) c[i] = -1;
      if (x.reach_up[i] > d) r[i] = -1;
    }
  }
  return {Matrix(),
          x.rows,
          y.cols,
          x.reach_up + y.reach_up,
          x.reach_down + y.reach_down,
          r,
          c,
          x.provenance + " " + y.provenance};
}

TruncatedOperator compose(const TruncatedOperator& x, const TruncatedOperator& y) {
  TruncatedOperator out = compose_bounds(x, y);
  out.matrix = product(x.matrix, y.matrix);
  return out;
}

TruncatedOperator compose(const std::vector<ComposeFactor>& factors) {
  if (factors.empty()) throw DimensionMismatch("compose: no factors");
  auto get = [](const ComposeFactor& f) { return f.adjoint ? f.op->adjoint() : *f.op; };
  TruncatedOperator acc = get(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) acc = compose(acc, get(factors[i]));
  return acc;
}

TruncatedOperator toeplitz_matrix(const LaurentSymbol& phi, const TruncationGrid& grid) {
  if (phi.n() != grid.n || phi.dim_out() != grid.dim_out || phi.dim_in() != grid.dim_in)
    throw DimensionMismatch("toeplitz_matrix: symbol shape does not match grid");
  BasisPtr rb = grid.row_basis();
  BasisPtr cb = grid.col_basis();
  Matrix m = Matrix::Zero(rb->size(), cb->size());
  const int dout = grid.dim_out, din = grid.dim_in;
  for (int pl = 0; pl < cb->monomial_count(); ++pl) {
    const MultiIndex& l = cb->monomial(pl);
    for (const auto& [k, c] : phi.terms()) {
      int pm = rb->position(l + k);
      if (pm >= 0) m.block(pm * dout, pl * din, dout, din) = c;
    }
  }
  MultiIndex full = MultiIndex::filled(grid.n, grid.degree);
  return {std::move(m),        rb,   cb, phi.upward_reach(), phi.downward_reach(), full,
          full, "T[symbol]"};
}

TruncatedOperator shift_matrix(int i, const BasisPtr& basis) {
  if (i < 0 || i >= basis->n())
    throw DimensionMismatch("shift_matrix: variable " + std::to_string(i + 1) + " out of range");
  if (basis->kind() != BasisKind::Analytic) throw DimensionMismatch("shift_matrix: analytic basis required");
  Matrix m = Matrix::Zero(basis->size(), basis->size());
  const int dim = basis->dim();
  MultiIndex e = MultiIndex::unit(basis->n(), i);
  for (int p = 0; p < basis->monomial_count(); ++p) {
    int q = basis->position(basis->monomial(p) + e);
    if (q < 0) continue;
    for (int f = 0; f < dim; ++f) m(q * dim + f, p * dim + f) = 1.0;
  }
  MultiIndex full = MultiIndex::filled(basis->n(), basis->degree());
  return {std::move(m), basis, basis, e, MultiIndex::zeros(basis->n()), full, full,
          "S" + std::to_string(i + 1)};
}

TruncatedOperator mult_shift_matrix(int i, const TruncationGrid& grid) {
  return shift_matrix(i, grid.col_basis());
}

TruncatedOperator identity_operator(const BasisPtr& basis) {
  MultiIndex full = MultiIndex::filled(basis->n(), basis->degree());
  MultiIndex z = MultiIndex::zeros(basis->n());
  return {Matrix::Identity(basis->size(), basis->size()), basis, basis, z, z, full, full, "I"};
}

TruncatedOperator hankel_matrix(const LaurentSymbol& phi, const TruncationGrid& grid) {
  if (phi.n() != grid.n || phi.dim_out() != grid.dim_out || phi.dim_in() != grid.dim_in)
    throw DimensionMismatch("hankel_matrix: symbol shape does not match grid");
  BasisPtr rb = make_basis(grid.n, grid.degree, grid.dim_out, BasisKind::Coanalytic);
  BasisPtr cb = grid.col_basis();
  Matrix m = Matrix::Zero(rb->size(), cb->size());
  const int dout = grid.dim_out, din = grid.dim_in;
  for (int pl = 0; pl < cb->monomial_count(); ++pl) {
    const MultiIndex& l = cb->monomial(pl);
    for (const auto& [k, c] : phi.terms()) {
      int pq = rb->position(l + k);
      if (pq >= 0) m.block(pq * dout, pl * din, dout, din) = c;
    }
  }
  MultiIndex full = MultiIndex::filled(grid.n, grid.degree);
  return {std::move(m), rb, cb, phi.upward_reach(), phi.downward_reach(), full, full,
          "H[symbol]"};
}

TruncatedOperator operator_from_matrix(const Matrix& m, BasisPtr rows, BasisPtr cols,
                                       std::string provenance) {
  if (m.rows() != rows->size() || m.cols() != cols->size())
    throw DimensionMismatch("operator_from_matrix: matrix shape does not match bases");
  const int n = rows->n();
  MultiIndex up = MultiIndex::zeros(n), down = MultiIndex::zeros(n);
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) {
      if (m(i, j) == Complex(0.0)) continue;
      MultiIndex diff = rows->monomial(i / rows->dim()) - cols->monomial(j / cols->dim());
      for (int v = 0; v < n; ++v) {
        up[v] = std::max(up[v], diff[v]);
        down[v] = std::max(down[v], -diff[v]);
      }
    }
  MultiIndex full = MultiIndex::filled(n, rows->degree());
  return {m, std::move(rows), std::move(cols), up, down, full, full, std::move(provenance)};
}

void require_window(const MultiIndex& window, int degree, const std::string& what) {
  if (window.min_entry() < 0) throw WindowExhausted(what, window, degree);
}

std::vector<int> window_indices(const Basis& basis, const MultiIndex& window) {
  std::vector<int> idx;
  for (int p = 0; p < basis.monomial_count(); ++p)
    if (basis.monomial(p).le(window))
      for (int f = 0; f < basis.dim(); ++f) idx.push_back(basis.flat(p, f));
  return idx;
}

Matrix principal_block(const TruncatedOperator& x, const MultiIndex& window) {
  std::vector<int> r = window_indices(*x.rows, window);
  std::vector<int> c = window_indices(*x.cols, window);
  return x.matrix(r, c);
}

VerificationReport compare_on_window(const TruncatedOperator& x, const TruncatedOperator& y,
                                     const MultiIndex& window, double tol,
                                     const std::string& check) {
  require_same(*x.rows, *y.rows, check);
  require_same(*x.cols, *y.cols, check);
  require_window(window, x.degree(), check);
  double worst2 = 0.0;  // squared, to skip hypot in the inner loop
  int wr = -1, wc = -1;
  for (int j : window_indices(*x.cols, window))
    for (int i = 0; i < x.matrix.rows(); ++i) {
      double d = std::norm(x.matrix(i, j) - y.matrix(i, j));
      if (d > worst2) {
        worst2 = d;
        wr = i;
        wc = j;
      }
    }
  const double worst = wr >= 0 ? std::abs(x.matrix(wr, wc) - y.matrix(wr, wc)) : 0.0;
  std::string witness;
  if (wr >= 0) {
    std::ostringstream os;
    os << "row " << x.rows->label(wr) << " col " << x.cols->label(wc) << " |diff|=" << worst;
    witness = os.str();
  }
  return make_report(check, worst, tol, window, witness);
}

VerificationReport compare_on_window(const TruncatedOperator& x, const TruncatedOperator& y,
                                     double tol, const std::string& check) {
  return compare_on_window(x, y, cwise_min(x.exact_cols, y.exact_cols), tol, check);
}

void write_matrix_text(std::ostream& os, const Matrix& m) {
  os.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j).real() << ' ' << m(i, j).imag();
    }
    os << '\n';
  }
}

}  // namespace polytoep
