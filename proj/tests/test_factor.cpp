#include "doctest.h"
#include "polytoep/errors.hpp"
#include "polytoep/factor.hpp"
#include "support.hpp"

using namespace polytoep;
using namespace testing_support;

namespace {

TruncatedOperator product_operator(const LaurentSymbol& g, const LaurentSymbol& p, int degree) {
  TruncatedOperator tg = toeplitz_matrix(g, degree), tp = toeplitz_matrix(p, degree);
  return compose({{&tg, false}, {&tp, true}});
}

TruncatedOperator gram_outer(const LaurentSymbol& s, int degree) {
  TruncatedOperator t = toeplitz_matrix(s, degree);
  return compose({{&t, false}, {&t, true}});
}

// Diagonal projection on the given flat indices.
Matrix diagonal_projection(int size, const std::vector<int>& on) {
  Matrix q = Matrix::Zero(size, size);
  for (int i : on) q(i, i) = 1.0;
  return q;
}

}  // namespace

TEST_CASE("range projection examples") {
  TruncatedOperator z = toeplitz_matrix(scalar_monomial({1}), 6);
  TruncatedOperator q = range_projection(z);
  Matrix expect = Matrix::Identity(7, 7);
  expect(0, 0) = 0.0;
  CHECK(compare_on_window(q, operator_from_matrix(expect, q.rows, q.cols), 1e-14).verdict);

  TruncatedOperator th = toeplitz_matrix(theta_example(), 6);
  TruncatedOperator qt = range_projection(th);
  std::vector<int> on;
  for (int p = 1; p < qt.rows->monomial_count(); ++p) on.push_back(qt.rows->flat(p, 0));
  Matrix et = diagonal_projection(qt.rows->size(), on);
  CHECK(compare_on_window(qt, operator_from_matrix(et, qt.rows, qt.cols), 1e-14).verdict);

  Matrix u = mat({{0, 1}, {1, 0}});
  TruncatedOperator qu = range_projection(toeplitz_matrix(LaurentSymbol::constant(2, u), 4));
  CHECK(compare_on_window(qu, identity_operator(qu.rows), 1e-14).verdict);

  CHECK_THROWS_AS(range_projection(toeplitz_matrix(pointwise_counterexample(), 8)), PreconditionFailed);
}

TEST_CASE("wandering basis examples") {
  WanderingBasis z = wandering_basis(range_projection(toeplitz_matrix(scalar_monomial({1}), 8)));
  REQUIRE(z.rank == 1);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(z.basis->size());
  e(z.basis->position(MultiIndex{1})) = 1.0;
  CHECK(std::abs(std::abs(z.vectors[0].dot(e)) - 1.0) < 1e-12);
  CHECK(z.gram_residual <= 1e-10);

  WanderingBasis th = wandering_basis(range_projection(toeplitz_matrix(theta_example(), 8)));
  REQUIRE(th.rank == 1);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(th.basis->size());
  f(th.basis->flat(th.basis->position(MultiIndex{1}), 0)) = 1.0;
  CHECK(std::abs(std::abs(th.vectors[0].dot(f)) - 1.0) < 1e-12);

  Matrix u = mat({{0, Complex(0, 1)}, {1, 0}});
  WanderingBasis id = wandering_basis(range_projection(toeplitz_matrix(LaurentSymbol::constant(2, u), 6)));
  REQUIRE(id.rank == 2);
  for (const auto& v : id.vectors)
    for (int i = 2; i < v.size(); ++i) CHECK(std::abs(v(i)) < 1e-14);
}

TEST_CASE("wandering vectors lie in ran Q and are orthogonal to the shifted range") {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    int n = 1 + seed % 3;
    int D = n == 3 ? 6 : 8;
    auto [g, p] = random_inner_pair(n, 2, 2, 1, seed);
    TruncatedOperator q = range_projection(product_operator(g, p, D));
    WanderingBasis wb = wandering_basis(q);
    CHECK(wb.gram_residual <= 1e-10);
    std::vector<int> inside = window_indices(*q.rows, q.exact_cols);
    for (const auto& v : wb.vectors) {
      // Q v = v, using only exact columns of Q.
      Eigen::VectorXcd qv = Eigen::VectorXcd::Zero(v.size());
      for (int c : inside) qv += q.matrix.col(c) * v(c);
      CHECK((qv - v).cwiseAbs().maxCoeff() < 1e-9);
      // v is orthogonal to z_i Q x for any x; test on the exact columns of S_i Q.
      for (int i = 0; i < n; ++i) {
        TruncatedOperator s = mult_shift_matrix(i, TruncationGrid{n, D, 2, 2});
        TruncatedOperator sq = compose(s, q);
        for (int c : window_indices(*q.rows, sq.exact_cols)) CHECK(std::abs(v.dot(sq.matrix.col(c))) < 1e-9);
      }
    }
  }
}

TEST_CASE("assemble_inner examples") {
  TruncatedOperator q = range_projection(toeplitz_matrix(scalar_monomial({1}), 8));
  LaurentSymbol th = assemble_inner(wandering_basis(q), &q);
  CHECK(th.terms().size() == 1);
  CHECK(std::abs(std::abs(th.coefficient(MultiIndex{1})(0, 0)) - 1.0) < 1e-12);

  TruncatedOperator qt = range_projection(toeplitz_matrix(theta_example(), 8));
  LaurentSymbol g = assemble_inner(wandering_basis(qt), &qt);
  CHECK(g.dim_out() == 2);
  CHECK(g.dim_in() == 1);
  CHECK(std::abs(std::abs(g.coefficient(MultiIndex{1})(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(g.coefficient(MultiIndex{1})(1, 0)) < 1e-12);
  CHECK(compare_on_window(gram_outer(g, 8), qt, 1e-9).verdict);

  Matrix u = mat({{0, 1}, {1, 0}});
  TruncatedOperator qi = range_projection(toeplitz_matrix(LaurentSymbol::constant(2, u), 6));
  LaurentSymbol c = assemble_inner(wandering_basis(qi), &qi);
  CHECK(c.is_constant());
  Matrix cc = c.coefficient(MultiIndex::zeros(2));
  CHECK(max_abs(cc.adjoint() * cc - Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("factor_partial_isometry examples") {
  Factorization th = factor_partial_isometry(toeplitz_matrix(theta_example(), 8));
  CHECK(th.reconstruction.verdict);
  CHECK(th.gamma.dim_in() == 1);
  CHECK(max_coefficient_distance(multiply(th.gamma, adjoint_symbol(th.psi)), theta_example()) < 1e-9);
  // Psi = (0, 1)^T up to a unimodular constant.
  CHECK(th.psi.is_constant());
  CHECK(std::abs(th.psi.coefficient(MultiIndex{0})(0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(th.psi.coefficient(MultiIndex{0})(1, 0)) - 1.0) < 1e-12);

  TruncatedOperator t12 = product_operator(scalar_monomial({1, 0}), scalar_monomial({0, 1}), 7);
  Factorization f12 = factor_partial_isometry(t12);
  CHECK(f12.residual() <= 1e-9);
  CHECK(max_coefficient_distance(multiply(f12.gamma, adjoint_symbol(f12.psi)), scalar_monomial({1, -1})) < 1e-9);
  CHECK(std::abs(std::abs(f12.gamma.coefficient(MultiIndex{1, 0})(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(f12.psi.coefficient(MultiIndex{0, 1})(0, 0)) - 1.0) < 1e-12);

  CHECK_THROWS_AS(factor_partial_isometry(toeplitz_matrix(pointwise_counterexample(), 8)), PreconditionFailed);
}

TEST_CASE("factorization round trip on generated inner pairs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    int n = 1 + seed % 3;
    int D = n == 3 ? 6 : 8;
    auto [g0, p0] = random_inner_pair(n, 2, 2, 1, seed);
    TruncatedOperator t = product_operator(g0, p0, D);
    Factorization f = factor_partial_isometry(t);
    CHECK(f.reconstruction.residual <= 1e-9);
    CHECK(is_inner(f.gamma).verdict);
    CHECK(is_inner(f.psi).verdict);
    CHECK(f.coeff.verdict);
    // Compared by projections, never by raw coefficients.
    CHECK(compare_on_window(gram_outer(f.gamma, D), gram_outer(g0, D), 1e-9).verdict);
    CHECK(compare_on_window(gram_outer(f.psi, D), gram_outer(p0, D), 1e-9).verdict);
    // The recovered symbol is the symbol of T, so it is gauge-free.
    LaurentSymbol phi = multiply(f.gamma, adjoint_symbol(f.psi));
    CHECK(max_coefficient_distance(phi, multiply(g0, adjoint_symbol(p0))) < 1e-9);
    CHECK(is_partial_isometry_ae(phi, 30, 1e-9, seed).verdict);
  }
}

TEST_CASE("shift intertwining of T^*T for partial isometries") {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    int n = 1 + seed % 3;
    int D = n == 3 ? 6 : 8;
    auto [g, p] = random_inner_pair(n, 2, 2, 1, seed + 100);
    TruncatedOperator t = product_operator(g, p, D);
    for (int i = 0; i < n; ++i) {
      TruncatedOperator s = mult_shift_matrix(i, TruncationGrid{n, D, 2, 2});
      TruncatedOperator lhs = compose({{&s, false}, {&t, true}, {&t, false}});
      TruncatedOperator rhs = compose({{&t, true}, {&s, false}, {&t, false}});
      CHECK(compare_on_window(lhs, rhs, 1e-9).verdict);
    }
  }
}

TEST_CASE("analytic factor") {
  AnalyticFactorization a = analytic_factor(theta_example(), 8);
  CHECK(a.residual <= 1e-9);
  CHECK(a.gamma.dim_in() == 1);
  CHECK(std::abs(std::abs(a.gamma.coefficient(MultiIndex{1})(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(a.v(0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(a.v(1, 0)) - 1.0) < 1e-12);

  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    int n = 1 + seed % 3;
    LaurentSymbol th = random_inner(n, 3, 2, 1, seed);
    AnalyticFactorization f = analytic_factor(th, n == 3 ? 5 : 7);
    CHECK(f.residual <= 1e-9);
    CHECK(max_abs(f.v.adjoint() * f.v - Matrix::Identity(2, 2)) < 1e-9);
    CHECK(max_abs(f.v * f.v.adjoint() - Matrix::Identity(2, 2)) < 1e-9);
  }

  Matrix v0 = mat({{1, 0}, {0, 0}, {0, 1}});
  AnalyticFactorization c = analytic_factor(LaurentSymbol::constant(1, v0), 4);
  CHECK(c.gamma.is_constant());
  CHECK(c.residual <= 1e-9);
  CHECK_THROWS_AS(analytic_factor(scalar_monomial({-1}), 4), NotAnalytic);
}

TEST_CASE("hyponormal and normal factorizations") {
  HyponormalFactorization z = hyponormal_factor(toeplitz_matrix(scalar_monomial({1}), 8));
  CHECK(z.psi.is_constant());
  CHECK(std::abs(std::abs(z.theta.coefficient(MultiIndex{1})(0, 0)) - 1.0) < 1e-12);
  CHECK(z.theta_inner.verdict);
  CHECK(z.reconstruction.verdict);

  TruncatedOperator t12 = product_operator(scalar_monomial({1, 0}), scalar_monomial({0, 1}), 7);
  CHECK_THROWS_AS(hyponormal_factor(t12), PreconditionFailed);

  LaurentSymbol psi = LaurentSymbol::monomial({1}, mat({{0}, {1}}));
  Complex w = std::polar(1.0, M_PI / 4);
  TruncatedOperator tp = toeplitz_matrix(psi, 8);
  TruncatedOperator tu = toeplitz_matrix(LaurentSymbol::constant(1, mat({{w}})), 8);
  TruncatedOperator t = compose({{&tp, false}, {&tu, false}, {&tp, true}});
  NormalFactorization nf = normal_factor(t);
  CHECK(nf.reconstruction.residual <= 1e-9);
  CHECK(nf.nonconstant_mass <= 1e-9);
  CHECK(nf.unitarity_residual <= 1e-12);
  REQUIRE(nf.u.rows() == 1);
  CHECK(std::abs(nf.u(0, 0) - w) < 1e-9);

  HyponormalFactorization hf = hyponormal_factor(t);
  CHECK(hf.theta.is_constant());
  CHECK(hf.negative_mass <= 1e-9);

  CHECK_THROWS_AS(normal_factor(toeplitz_matrix(scalar_monomial({1}), 8)), PreconditionFailed);
}
