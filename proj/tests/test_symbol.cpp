#include <cstring>

#include "doctest.h"
#include "polytoep/errors.hpp"
#include "polytoep/symbol.hpp"
#include "polytoep/symbol_io.hpp"
#include "support.hpp"

using namespace polytoep;
using namespace testing_support;

namespace {

// Direct substitution, one std::pow per coordinate.
Matrix eval_by_terms(const LaurentSymbol& phi, const Point& z) {
  Matrix out = Matrix::Zero(phi.dim_out(), phi.dim_in());
  for (const auto& [k, c] : phi.terms()) {
    Complex w = 1.0;
    for (int i = 0; i < phi.n(); ++i) w *= std::pow(z[i], k[i]);
    out += w * c;
  }
  return out;
}

bool bit_equal(const LaurentSymbol& a, const LaurentSymbol& b) {
  if (a.terms().size() != b.terms().size()) return false;
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return false;
    const Matrix& x = ia->second;
    const Matrix& y = ib->second;
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    if (std::memcmp(x.data(), y.data(), sizeof(Complex) * x.size()) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("canonical form drops zero coefficients and merges repeats") {
  LaurentSymbol s(1, 1, 1,
                  {{MultiIndex{1}, mat({{1.0}})},
                   {MultiIndex{1}, mat({{-1.0}})},
                   {MultiIndex{2}, mat({{1e-15}})},
                   {MultiIndex{0}, mat({{2.0}})}});
  CHECK(s.terms().size() == 1);
  CHECK(s.is_constant());
  CHECK(s.coefficient(MultiIndex{0})(0, 0) == Complex(2.0));
}

TEST_CASE("band radius and analytic flag") {
  LaurentSymbol s(2, 1, 1, {{MultiIndex{2, -1}, mat({{1.0}})}, {MultiIndex{-3, 1}, mat({{1.0}})}});
  CHECK(s.band_radius() == MultiIndex{3, 1});
  CHECK(s.upward_reach() == MultiIndex{2, 1});
  CHECK(s.downward_reach() == MultiIndex{3, 1});
  CHECK_FALSE(s.is_analytic());
  CHECK(theta_example().is_analytic());
}

TEST_CASE("eval examples") {
  Matrix v = eval(theta_example(), {0.5});
  CHECK(max_abs(v - mat({{0, 0.5}, {0, 0}})) == 0.0);

  std::mt19937_64 rng(3);
  Matrix c = random_matrix(2, 3, rng);
  for (const Point& z : torus_samples(2, 5, 1))
    CHECK(max_abs(eval(LaurentSymbol::constant(2, c), z) - c) == 0.0);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LaurentSymbol phi = random_symbol(2, 2, 2, 3, false, 6, seed);
    for (const Point& z : torus_samples(2, 10, seed + 100))
      CHECK(max_abs(eval(phi, z) - eval_by_terms(phi, z)) < 1e-12);
  }
}

TEST_CASE("eval errors") {
  CHECK_THROWS_AS(eval(theta_example(), {0.5, 0.5}), DimensionMismatch);
  LaurentSymbol zbar = scalar_monomial({-1});
  CHECK_THROWS_AS(eval(zbar, {0.0}), Error);
  CHECK_NOTHROW(eval(scalar_monomial({1}), {0.0}));
}

TEST_CASE("adjoint symbol") {
  LaurentSymbol a = adjoint_symbol(theta_example());
  REQUIRE(a.terms().size() == 1);
  CHECK(a.terms().begin()->first == MultiIndex{-1});
  CHECK(max_abs(a.terms().begin()->second - mat({{0, 0}, {1, 0}})) == 0.0);

  Matrix u = mat({{0, 1}, {Complex(0, 1), 0}});
  LaurentSymbol cu = adjoint_symbol(LaurentSymbol::constant(1, u));
  CHECK(max_abs(cu.coefficient(MultiIndex{0}) - u.adjoint()) == 0.0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    LaurentSymbol phi = random_symbol(1 + seed % 3, 1 + seed % 2, 1 + seed % 3, 2, false, 5, seed);
    CHECK(bit_equal(adjoint_symbol(adjoint_symbol(phi)), phi));
  }
}

TEST_CASE("multiply") {
  LaurentSymbol t = theta_example();
  LaurentSymbol g = multiply(adjoint_symbol(t), t);
  CHECK(g.is_constant());
  CHECK(max_abs(g.coefficient(MultiIndex{0}) - mat({{0, 0}, {0, 1}})) == 0.0);

  LaurentSymbol one = multiply(scalar_monomial({1}), scalar_monomial({-1}));
  CHECK(one.is_constant());
  CHECK(one.coefficient(MultiIndex{0})(0, 0) == Complex(1.0));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    int n = 1 + seed % 3;
    LaurentSymbol a = random_symbol(n, 2, 3, 2, false, 5, seed);
    LaurentSymbol b = random_symbol(n, 3, 2, 2, false, 5, seed + 1000);
    LaurentSymbol ab = multiply(a, b);
    for (const Point& z : torus_samples(n, 10, seed))
      CHECK(max_abs(eval(ab, z) - eval(a, z) * eval(b, z)) < 1e-10);
  }
  CHECK_THROWS_AS(multiply(theta_example(), scalar_monomial({1})), DimensionMismatch);
}

TEST_CASE("restrict_zero") {
  LaurentSymbol s = scalar_monomial({1, 0}) + scalar_monomial({0, 1});
  LaurentSymbol r = restrict_zero(s, VarSet{0});
  CHECK(max_coefficient_distance(r, scalar_monomial({0, 1})) == 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3;
    LaurentSymbol phi = random_symbol(n, 2, 2, 2, true, 8, seed);
    LaurentSymbol all = restrict_zero(phi, VarSet::all(n));
    CHECK(all.is_constant());
    CHECK(max_abs(all.coefficient(MultiIndex::zeros(n)) - eval(phi, Point(n, 0.0))) < 1e-14);

    VarSet a(seed % 8), b((seed / 8) % 8);
    CHECK(bit_equal(restrict_zero(restrict_zero(phi, a), b), restrict_zero(phi, a | b)));

    for (Point z : polydisc_samples(n, 5, 0.9, seed)) {
      Matrix lhs = eval(restrict_zero(phi, a), z);
      for (int i : a.members()) z[i] = 0.0;
      CHECK(max_abs(lhs - eval(phi, z)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(restrict_zero(scalar_monomial({-1}), VarSet{0}), NotAnalytic);
}

TEST_CASE("is_inner") {
  CHECK(is_inner(scalar_monomial({1})).verdict);
  InnerCertificate c = is_inner(theta_example());
  CHECK_FALSE(c.verdict);
  CHECK(c.residual == doctest::Approx(1.0));
  CHECK(is_inner(LaurentSymbol::constant(1, mat({{0}, {1}}))).verdict);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 1 + seed % 3;
    LaurentSymbol th = random_inner(n, 3, 2, 2, seed);
    CHECK(is_inner(th).verdict);
    // Pointwise check on the torus, independent of the convolution.
    for (const Point& z : torus_samples(n, 5, seed)) {
      Matrix v = eval(th, z);
      CHECK(max_abs(v.adjoint() * v - Matrix::Identity(2, 2)) < 1e-12);
    }
  }
}

TEST_CASE("random_inner example with a single column") {
  LaurentSymbol psi = LaurentSymbol::monomial({1, 0}, mat({{0}, {1}}));
  CHECK(is_inner(psi).verdict);
  LaurentSymbol zero_exp = random_inner(2, 3, 2, 0, 5);
  CHECK(zero_exp.is_constant());
  CHECK(is_inner(zero_exp).verdict);
  CHECK(bit_equal(random_inner(2, 3, 2, 2, 11), random_inner(2, 3, 2, 2, 11)));
  CHECK_THROWS_AS(random_inner(2, 1, 2, 1, 0), Error);
}

TEST_CASE("pointwise partial isometry") {
  PointwisePartialIsometry p = is_partial_isometry_ae(pointwise_counterexample(), 100);
  CHECK(p.verdict);
  CHECK(p.exact_residual <= 1e-10);
  CHECK(p.sampled_residual <= 1e-10);
  CHECK(p.samples == 100);

  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK(is_partial_isometry_ae(random_inner(2, 3, 2, 2, seed), 20).verdict);

  PointwisePartialIsometry half = is_partial_isometry_ae(LaurentSymbol::constant(1, 0.5 * Matrix::Identity(2, 2)), 10);
  CHECK_FALSE(half.verdict);
  CHECK(half.exact_residual == doctest::Approx(0.375));
}

TEST_CASE("random_product_pair rank-one construction") {
  // x y^* times (w v^*)^* = x (y^* v) w^* vanishes when y is orthogonal to v.
  Matrix y = mat({{1}, {0}}), v = mat({{0}, {1}});
  Matrix x = mat({{1}, {2}}), w = mat({{3}, {Complex(0, 1)}});
  CHECK(max_abs((x * y.adjoint()) * (w * v.adjoint()).adjoint()) == 0.0);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    int n = 1 + seed % 3;
    auto [g, p] = random_product_pair(n, 2, 2, 2, true, seed);
    CHECK(g.is_analytic());
    CHECK(p.is_analytic());
    double worst = 0.0;
    for (const auto& [kl, a] : g.terms())
      for (const auto& [km, b] : p.terms())
        for (int i = 0; i < n; ++i)
          if (kl[i] >= 1 && km[i] >= 1) worst = std::max(worst, max_abs(a * b.adjoint()));
    CHECK(worst < 1e-14);

    auto [g2, p2] = random_product_pair(n, 2, 2, 2, false, seed);
    double bad = 0.0;
    for (const auto& [kl, a] : g2.terms())
      for (const auto& [km, b] : p2.terms())
        for (int i = 0; i < n; ++i)
          if (kl[i] >= 1 && km[i] >= 1) bad = std::max(bad, max_abs(a * b.adjoint()));
    CHECK(bad >= 0.1);
  }
}

TEST_CASE("symbol documents round-trip bit-exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LaurentSymbol phi = random_symbol(1 + seed % 3, 1 + seed % 3, 1 + seed % 2, 3, seed % 2, 6, seed);
    LaurentSymbol back = parse_symbol(dump_symbol(phi));
    CHECK(bit_equal(phi, back));
    CHECK(back.dim_out() == phi.dim_out());
    CHECK(back.dim_in() == phi.dim_in());
  }
  LaurentSymbol odd(1, 1, 1, {{MultiIndex{0}, mat({{Complex(0.1, 1.0 / 3.0)}})}});
  CHECK(bit_equal(parse_symbol(dump_symbol(odd)), odd));
}

TEST_CASE("symbol document errors carry line and field") {
  const std::string good =
      "{\n  \"n\": 1,\n  \"dim_out\": 1,\n  \"dim_in\": 1,\n  \"terms\": [\n"
      "    {\"k\": [1], \"c\": [[1, 0]]},\n    {\"k\": [2, 3], \"c\": [[1, 0]]}\n  ]\n}\n";
  try {
    parse_symbol(good, "doc.json");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.path() == "doc.json");
    CHECK(e.line() == 7);
    CHECK(e.field() == "terms[1].k");
  }
  try {
    parse_symbol("{\"n\": 1, \"dim_out\": 1,\n \"terms\": []}", "x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "dim_in");
  }
  try {
    parse_symbol("{\n\"n\": 1,\n oops}", "y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "<syntax>");
  }
  CHECK_THROWS_AS(parse_symbol("{\"n\":1,\"dim_out\":1,\"dim_in\":2,\"terms\":[{\"k\":[0],\"c\":[[1,0]]}]}"),
                  ParseError);
  CHECK_THROWS_AS(read_symbol("/nonexistent/file.json"), ParseError);
}
