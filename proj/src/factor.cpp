#include "polytoep/factor.hpp"

#include <map>
#include <sstream>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

constexpr double kChop = 1e-12;
// A Gram-Schmidt remainder below this is a dependent column.
constexpr double kDependent = 1e-6;

TruncatedOperator shifts_of(VarSet a, const BasisPtr& basis) {
  TruncatedOperator s = identity_operator(basis);
  for (int i : a.members()) s = compose(s, shift_matrix(i, basis));
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

TruncatedOperator range_projection(const TruncatedOperator& t, double tol) {
  VerificationReport gate = check_partial_isometry(t, tol);
  if (!gate.verdict) throw PreconditionFailed("range_projection: not a partial isometry", gate);
  TruncatedOperator q = range_projection_of(t);
  VerificationReport idem = compare_on_window(compose(q, q), q, tol, "idempotent");
  if (!idem.verdict) throw PreconditionFailed("range_projection: Q^2 != Q", idem);
  return q;
}

WanderingBasis wandering_basis(const TruncatedOperator& q, double tol) {
  VerificationReport dc = projection_doubly_commuting(q, tol);
  if (!dc.verdict) throw PreconditionFailed("wandering_basis: range not doubly commuting", dc);

  const BasisPtr& basis = q.rows;
  const int n = q.n();
  std::optional<TruncatedOperator> pw;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    VarSet a(bits);
    TruncatedOperator s = shifts_of(a, basis);
    TruncatedOperator term = compose({{&s, false}, {&q, false}, {&s, true}});
    if (a.count() % 2) term = term.scaled(-1.0);
    pw = pw ? *pw + term : term;
  }
  WanderingBasis wb;
  wb.basis = basis;
  wb.window = pw->exact_cols;
  require_window(wb.window, q.degree(), "wandering_basis");
  std::vector<int> cols = window_indices(*basis, wb.window);
  Matrix block = pw->matrix(Eigen::placeholders::all, cols);

  Eigen::JacobiSVD<Matrix> svd(block);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankThreshold) ++rank;

  for (int c = 0; c < block.cols() && static_cast<int>(wb.vectors.size()) < rank + 1; ++c) {
    Eigen::VectorXcd v = block.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : wb.vectors) v -= u * u.dot(v);
    double norm = v.norm();
    if (norm > kDependent) wb.vectors.push_back(v / norm);
  }
  if (static_cast<int>(wb.vectors.size()) != rank)
    throw InconclusiveTruncation("wandering_basis: Gram-Schmidt found " +
                                 std::to_string(wb.vectors.size()) + " vectors, SVD rank " +
                                 std::to_string(rank));
  wb.rank = rank;

  for (auto& v : wb.vectors) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) < kChop) v[i] = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] == Complex(0.0)) continue;
      const MultiIndex& k = basis->monomial(static_cast<int>(i) / basis->dim());
      if (!k.le(wb.window))
        throw InconclusiveTruncation("wandering_basis: wandering vector reaches " + k.to_string() +
                                     " beyond window " + wb.window.to_string() +
                                     "; increase the degree");
    }
  }
  Matrix gram(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) gram(i, j) = wb.vectors[i].dot(wb.vectors[j]);
  wb.gram_residual = rank ? max_abs(gram - Matrix::Identity(rank, rank)) : 0.0;
  return wb;
}

LaurentSymbol assemble_inner(const WanderingBasis& wb, const TruncatedOperator* q, double tol) {
  if (wb.rank < 1) throw FactorizationError("assemble_inner: empty wandering subspace");
  const Basis& b = *wb.basis;
  std::map<MultiIndex, Matrix> coeffs;
  for (int j = 0; j < wb.rank; ++j)
    for (int p = 0; p < b.monomial_count(); ++p) {
      Eigen::VectorXcd seg = wb.vectors[j].segment(p * b.dim(), b.dim());
      if (seg.isZero(0.0)) continue;
      auto it = coeffs.try_emplace(b.monomial(p), Matrix::Zero(b.dim(), wb.rank)).first;
      it->second.col(j) = seg;
    }
  LaurentSymbol theta(b.n(), b.dim(), wb.rank,
                      std::vector<std::pair<MultiIndex, Matrix>>(coeffs.begin(), coeffs.end()));
  InnerCertificate cert = is_inner(theta);
  if (!cert.verdict)
    throw InconclusiveTruncation("range not polynomially Beurling at this truncation: |Theta^*Theta - I| = " +
                                 fmt(cert.residual) + " at " + cert.worst_index.to_string());
  if (q) {
    TruncatedOperator mt = toeplitz_matrix(theta, q->degree());
    VerificationReport r =
        compare_on_window(compose({{&mt, false}, {&mt, true}}), *q, tol, "beurling_projection");
    if (!r.verdict)
      throw InconclusiveTruncation("assemble_inner: M_Theta M_Theta^* != Q on window (" +
                                   r.witness + ")");
  }
  return theta;
}

Factorization factor_partial_isometry(const TruncatedOperator& t, double tol) {
  VerificationReport gate = check_partial_isometry(t, tol);
  if (!gate.verdict) throw PreconditionFailed("factor_partial_isometry: not a partial isometry", gate);
  TruncatedOperator q = range_projection_of(t);
  TruncatedOperator qs = range_projection_of(t.adjoint());
  LaurentSymbol gamma = assemble_inner(wandering_basis(q, tol), &q, tol);
  LaurentSymbol psi0 = assemble_inner(wandering_basis(qs, tol), &qs, tol);
  if (gamma.dim_in() != psi0.dim_in())
    throw FactorizationError("factor_partial_isometry: range rank " +
                             std::to_string(gamma.dim_in()) + " != co-range rank " +
                             std::to_string(psi0.dim_in()));
  const int r = gamma.dim_in();
  const int d = t.degree();

  TruncatedOperator mg = toeplitz_matrix(gamma, d);
  TruncatedOperator mp0 = toeplitz_matrix(psi0, d);
  TruncatedOperator x = compose({{&mg, true}, {&t, false}, {&mp0, false}});
  Matrix x0 = x.matrix.topLeftCorner(r, r);
  Factorization f{gamma, psi0, x0, {}, {}, {}, {}, {}};
  f.gauge_constancy = compare_on_window(x, toeplitz_matrix(LaurentSymbol::constant(t.n(), x0), d),
                                        tol, "gauge_constancy");
  if (!f.gauge_constancy.verdict)
    throw FactorizationError("factor_partial_isometry: M_Gamma^* T M_Psi0 is not constant (" +
                             f.gauge_constancy.witness + ")");
  f.psi = psi0.right_multiply(x0.adjoint());

  TruncatedOperator mp = toeplitz_matrix(f.psi, d);
  f.reconstruction = compare_on_window(compose({{&mg, false}, {&mp, true}}), t, tol, "reconstruction");
  f.range_gamma = compare_on_window(compose({{&mg, false}, {&mg, true}}), q, tol, "range_gamma");
  f.range_psi = compare_on_window(compose({{&mp, false}, {&mp, true}}), qs, tol, "range_psi");
  f.coeff = coeff_condition(f.gamma, f.psi);
  return f;
}

AnalyticFactorization analytic_factor(const LaurentSymbol& phi, int degree, double tol) {
  if (!phi.is_analytic()) throw NotAnalytic("analytic_factor: symbol has negative exponents");
  TruncatedOperator t = toeplitz_matrix(phi, degree);
  TruncatedOperator q = range_projection(t, tol);
  LaurentSymbol gamma = assemble_inner(wandering_basis(q, tol), &q, tol);
  TruncatedOperator mg = toeplitz_matrix(gamma, degree);
  Matrix vstar = compose({{&mg, true}, {&t, false}}).matrix.topLeftCorner(gamma.dim_in(), phi.dim_in());
  AnalyticFactorization out{gamma, vstar.adjoint(), 0.0};
  out.residual = max_coefficient_distance(phi, gamma.right_multiply(vstar));
  return out;
}

HyponormalFactorization hyponormal_factor(const TruncatedOperator& t, double tol) {
  VerificationReport pi = check_partial_isometry(t, tol);
  if (!pi.verdict) throw PreconditionFailed("hyponormal_factor: not a partial isometry", pi);
  VerificationReport hyp = check_hyponormal(t, tol);
  if (!hyp.verdict) throw PreconditionFailed("hyponormal_factor: not hyponormal", hyp);
  Factorization f = factor_partial_isometry(t, tol);
  LaurentSymbol z = multiply(adjoint_symbol(f.psi), f.gamma);

  HyponormalFactorization out{f.psi, LaurentSymbol(z.n(), z.dim_out(), z.dim_in()), 0.0, {}, {}};
  std::vector<std::pair<MultiIndex, Matrix>> analytic;
  for (const auto& [k, c] : z.terms()) {
    if (k.is_nonnegative())
      analytic.emplace_back(k, c);
    else
      out.negative_mass = std::max(out.negative_mass, max_abs(c));
  }
  if (out.negative_mass > tol)
    throw FactorizationError("hyponormal_factor: Psi^* Gamma has negative-frequency mass " +
                             fmt(out.negative_mass));
  out.theta = LaurentSymbol(z.n(), z.dim_out(), z.dim_in(), analytic);
  out.theta_inner = is_inner(out.theta);
  if (!out.theta_inner.verdict)
    throw FactorizationError("hyponormal_factor: Theta is not inner (residual " +
                             fmt(out.theta_inner.residual) + ")");
  const int d = t.degree();
  TruncatedOperator mp = toeplitz_matrix(out.psi, d);
  TruncatedOperator mt = toeplitz_matrix(out.theta, d);
  out.reconstruction = compare_on_window(compose({{&mp, false}, {&mt, false}, {&mp, true}}), t, tol,
                                         "reconstruction");
  return out;
}

NormalFactorization normal_factor(const TruncatedOperator& t, double tol) {
  VerificationReport nr = check_normal(t, tol);
  if (!nr.verdict) throw PreconditionFailed("normal_factor: not normal", nr);
  HyponormalFactorization h = hyponormal_factor(t, tol);
  NormalFactorization out{h.psi, h.theta.coefficient(MultiIndex::zeros(t.n())), 0.0, 0.0, {}};
  for (const auto& [k, c] : h.theta.terms())
    if (!k.is_zero()) out.nonconstant_mass = std::max(out.nonconstant_mass, max_abs(c));
  out.unitarity_residual = std::max(max_abs(out.u.adjoint() * out.u - Matrix::Identity(out.u.cols(), out.u.cols())),
                                    max_abs(out.u * out.u.adjoint() - Matrix::Identity(out.u.rows(), out.u.rows())));
  if (out.nonconstant_mass > tol || out.unitarity_residual > tol)
    throw FactorizationError("normal_factor: Theta is not a constant unitary (nonconstant mass " +
                             fmt(out.nonconstant_mass) + ", unitarity " + fmt(out.unitarity_residual) +
                             ")");
  const int d = t.degree();
  TruncatedOperator mp = toeplitz_matrix(out.psi, d);
  TruncatedOperator mu = toeplitz_matrix(LaurentSymbol::constant(t.n(), out.u), d);
  out.reconstruction = compare_on_window(compose({{&mp, false}, {&mu, false}, {&mp, true}}), t, tol,
                                         "reconstruction");
  return out;
}

}  // namespace polytoep
