#include "polytoep/verify.hpp"

#include <sstream>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

void require_analytic(const TruncatedOperator& t, const std::string& what) {
  if (t.rows->kind() != BasisKind::Analytic || t.cols->kind() != BasisKind::Analytic)
    throw DimensionMismatch(what + ": operator must act between Hardy-space grids");
}

void require_square(const TruncatedOperator& t, const std::string& what) {
  require_analytic(t, what);
  if (!(*t.rows == *t.cols)) throw DimensionMismatch(what + ": operator must be square");
}

// Worst residual, narrowest window.
VerificationReport merge(const std::string& name, const std::vector<VerificationReport>& parts,
                         double tol, const std::vector<std::string>& prefixes) {
  VerificationReport out;
  out.check = name;
  out.tolerance = tol;
  out.verdict = true;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    if (p.window) out.window = out.window ? cwise_min(*out.window, *p.window) : *p.window;
    if (p.residual > parts[worst].residual) worst = k;
  }
  if (!parts.empty()) {
    out.residual = parts[worst].residual;
    out.verdict = out.residual <= tol;
    if (!out.verdict) out.witness = prefixes[worst] + parts[worst].witness;
  }
  return out;
}

TruncatedOperator hermitian_part(const TruncatedOperator& a) {
  TruncatedOperator h = a;
  h.matrix = (a.matrix + a.matrix.adjoint()) / 2.0;
  MultiIndex w = cwise_min(a.exact_rows, a.exact_cols);
  h.exact_rows = w;
  h.exact_cols = w;
  return h;
}

std::string var_prefix(int i) { return "i=" + std::to_string(i + 1) + ": "; }
std::string pair_prefix(int i, int j) {
  return "i=" + std::to_string(i + 1) + ",j=" + std::to_string(j + 1) + ": ";
}

}  // namespace

VerificationReport check_toeplitz(const TruncatedOperator& t, double tol) {
  require_analytic(t, "check_toeplitz");
  std::vector<VerificationReport> parts;
  std::vector<std::string> prefixes;
  const int n = t.n();
  const MultiIndex full = MultiIndex::filled(n, t.degree());
  const MultiIndex zero = MultiIndex::zeros(n);
  const int dout = t.rows->dim(), din = t.cols->dim();
  Matrix buffer;
  for (int i = 0; i < n; ++i) {
    // S^* T S only moves entries, so build it by reindexing and take the
    // window from the composition bookkeeping.
    const MultiIndex e = MultiIndex::unit(n, i);
    TruncatedOperator sr{Matrix(), t.rows, t.rows, zero, e, full, full, "S*"};
    TruncatedOperator sc{Matrix(), t.cols, t.cols, e, zero, full, full, "S"};
    TruncatedOperator conj = compose_bounds(sr, compose_bounds(t, sc));
    conj.matrix.swap(buffer);
    conj.matrix.setZero(t.matrix.rows(), t.matrix.cols());
    // Scalar row map: conj row r reads T row src_row[r], or stays zero.
    std::vector<Eigen::Index> src_row(t.matrix.rows(), -1);
    for (int pm = 0; pm < t.rows->monomial_count(); ++pm) {
      int qm = t.rows->position(t.rows->monomial(pm) + e);
      if (qm < 0) continue;
      for (int f = 0; f < dout; ++f) src_row[pm * dout + f] = qm * dout + f;
    }
    for (int pl = 0; pl < t.cols->monomial_count(); ++pl) {
      int ql = t.cols->position(t.cols->monomial(pl) + e);
      if (ql < 0) continue;
      for (int f = 0; f < din; ++f) {
        const Complex* src = t.matrix.col(ql * din + f).data();
        Complex* dst = conj.matrix.col(pl * din + f).data();
        for (std::size_t r = 0; r < src_row.size(); ++r)
          if (src_row[r] >= 0) dst[r] = src[src_row[r]];
      }
    }
    parts.push_back(compare_on_window(conj, t, tol, "toeplitz"));
    prefixes.push_back(var_prefix(i));
    buffer.swap(conj.matrix);
  }
  return merge("toeplitz", parts, tol, prefixes);
}

VerificationReport check_isometry(const TruncatedOperator& t, double tol) {
  require_analytic(t, "check_isometry");
  TruncatedOperator gram = compose({{&t, true}, {&t, false}});
  VerificationReport r = compare_on_window(gram, identity_operator(t.cols), tol, "isometry");
  if (!r.verdict) r.witness = "T^*T - I at " + r.witness;
  return r;
}

VerificationReport check_unitary(const TruncatedOperator& t, double tol) {
  require_square(t, "check_unitary");
  TruncatedOperator gram = compose({{&t, true}, {&t, false}});
  TruncatedOperator cogram = compose({{&t, false}, {&t, true}});
  TruncatedOperator id = identity_operator(t.cols);
  return merge("unitary",
               {compare_on_window(gram, id, tol, "isometry"),
                compare_on_window(cogram, id, tol, "co-isometry")},
               tol, {"T^*T - I at ", "TT^* - I at "});
}

VerificationReport check_partial_isometry(const TruncatedOperator& t, double tol) {
  require_analytic(t, "check_partial_isometry");
  TruncatedOperator triple = compose({{&t, false}, {&t, true}, {&t, false}});
  VerificationReport r = compare_on_window(triple, t, tol, "partial_isometry");
  if (!r.verdict) r.witness = "TT^*T - T at " + r.witness;
  return r;
}

VerificationReport check_hyponormal(const TruncatedOperator& t, double tol) {
  require_square(t, "check_hyponormal");
  TruncatedOperator comm = hermitian_part(compose({{&t, true}, {&t, false}}) -
                                          compose({{&t, false}, {&t, true}}));
  MultiIndex w = comm.exact_cols;
  require_window(w, t.degree(), "check_hyponormal");
  Matrix block = principal_block(comm, w);
  double lmin = 0.0;
  if (block.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(block, Eigen::EigenvaluesOnly);
    lmin = es.eigenvalues().minCoeff();
  }
  std::ostringstream os;
  os << "lambda_min(T^*T - TT^*) = " << lmin;
  return make_report("hyponormal", std::max(0.0, -lmin), tol, w, os.str());
}

VerificationReport check_normal(const TruncatedOperator& t, double tol) {
  require_square(t, "check_normal");
  TruncatedOperator a = compose({{&t, true}, {&t, false}});
  TruncatedOperator b = compose({{&t, false}, {&t, true}});
  VerificationReport r = compare_on_window(a, b, tol, "normal");
  if (!r.verdict) r.witness = "[T^*, T] at " + r.witness;
  return r;
}

VerificationReport hankel_factor_identity_check(const LaurentSymbol& f, const LaurentSymbol& g,
                                                int degree, double tol) {
  if (f.n() != g.n() || f.dim_in() != g.dim_out())
    throw DimensionMismatch("hankel_factor_identity_check: F and G do not chain");
  const int n = f.n();
  TruncatedOperator tfg = toeplitz_matrix(multiply(f, g), degree);
  TruncatedOperator tf = toeplitz_matrix(f, degree);
  TruncatedOperator tg = toeplitz_matrix(g, degree);
  LaurentSymbol fs = adjoint_symbol(f);
  TruncatedOperator hfs = hankel_matrix(fs, {n, degree, fs.dim_out(), fs.dim_in()});
  TruncatedOperator hg = hankel_matrix(g, {n, degree, g.dim_out(), g.dim_in()});
  TruncatedOperator rhs = compose(tf, tg) + compose({{&hfs, true}, {&hg, false}});
  return compare_on_window(tfg, rhs, tol, "hankel_identity");
}

TruncatedOperator range_projection_of(const TruncatedOperator& t) {
  TruncatedOperator q = hermitian_part(compose({{&t, false}, {&t, true}}));
  q.provenance = "Q";
  return q;
}

VerificationReport projection_shift_invariant(const TruncatedOperator& q, double tol) {
  require_square(q, "shift invariance");
  TruncatedOperator comp = identity_operator(q.rows) - q;
  std::vector<VerificationReport> parts;
  std::vector<std::string> prefixes;
  for (int i = 0; i < q.n(); ++i) {
    TruncatedOperator s = shift_matrix(i, q.rows);
    TruncatedOperator leak = compose({{&comp, false}, {&s, false}, {&q, false}});
    TruncatedOperator zero = leak;
    zero.matrix.setZero();
    parts.push_back(compare_on_window(leak, zero, tol, "range_shift_invariant"));
    prefixes.push_back("(I-Q)M_z Q, " + var_prefix(i));
  }
  return merge("range_shift_invariant", parts, tol, prefixes);
}

VerificationReport projection_doubly_commuting(const TruncatedOperator& q, double tol) {
  VerificationReport gate = projection_shift_invariant(q, tol);
  if (!gate.verdict) throw PreconditionFailed("range is not shift invariant", gate);
  const int n = q.n();
  if (n == 1) return make_report("range_doubly_commuting", 0.0, tol, q.exact_cols, "");

  // Q R_i^* R_j Q = Q S_i^* Q S_j Q, using Q^2 = Q.
  std::vector<TruncatedOperator> qs, qsa, qsq, qsaq;
  for (int i = 0; i < n; ++i) {
    TruncatedOperator s = shift_matrix(i, q.rows);
    qs.push_back(compose(q, s));
    qsa.push_back(compose({{&q, false}, {&s, true}}));
  }
  for (int i = 0; i < n; ++i) {
    qsq.push_back(compose(qs[i], q));
    qsaq.push_back(compose(qsa[i], q));
  }
  std::vector<VerificationReport> parts;
  std::vector<std::string> prefixes;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      TruncatedOperator a = compose(qsa[i], qsq[j]);
      TruncatedOperator b = compose(qs[j], qsaq[i]);
      parts.push_back(compare_on_window(a, b, tol, "range_doubly_commuting"));
      prefixes.push_back("[R_i^*, R_j], " + pair_prefix(i, j));
    }
  return merge("range_doubly_commuting", parts, tol, prefixes);
}

VerificationReport check_range_shift_invariant(const TruncatedOperator& t, double tol) {
  VerificationReport gate = check_partial_isometry(t, tol);
  if (!gate.verdict) throw PreconditionFailed("operator is not a partial isometry", gate);
  return projection_shift_invariant(range_projection_of(t), tol);
}

VerificationReport check_range_doubly_commuting(const TruncatedOperator& t, double tol) {
  VerificationReport gate = check_partial_isometry(t, tol);
  if (!gate.verdict) throw PreconditionFailed("operator is not a partial isometry", gate);
  return projection_doubly_commuting(range_projection_of(t), tol);
}

}  // namespace polytoep
