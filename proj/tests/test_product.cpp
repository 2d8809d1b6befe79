#include <algorithm>

#include "doctest.h"
#include "polytoep/errors.hpp"
#include "polytoep/product.hpp"
#include "polytoep/verify.hpp"
#include "support.hpp"

using namespace polytoep;
using namespace testing_support;

namespace {

// "13" -> variables {1, 3} in 1-based notation; "*" -> all n variables.
VarSet vars(const std::string& s, int n) {
  if (s == "*") return VarSet::all(n);
  VarSet v;
  for (char c : s) v = v.with(c - '1');
  return v;
}

Decomposition from_table(int n, const std::vector<std::tuple<int, std::string, std::string>>& rows) {
  Decomposition d{n, {}};
  for (const auto& [sign, a, b] : rows) d.terms.push_back({sign, vars(a, n), vars(b, n)});
  return d;
}

// As printed for the bidisc: first slot is the Gamma index set, second the Psi
// index set, "" for no restriction and "*" for evaluation at 0.
Decomposition printed_bidisc() {
  return from_table(2, {{+1, "", "*"},
                        {+1, "1", "2"}, {-1, "1", "*"},
                        {+1, "2", "1"}, {-1, "2", "*"},
                        {+1, "*", ""}, {+1, "*", "1"}, {+1, "*", "2"}, {-1, "*", "*"}});
}

Decomposition printed_tridisc() {
  return from_table(3, {{+1, "", "*"},
                        {-1, "1", "*"}, {+1, "1", "23"},
                        {-1, "2", "*"}, {+1, "2", "13"},
                        {-1, "3", "*"}, {+1, "3", "12"},
                        {+1, "12", "*"}, {-1, "12", "13"}, {-1, "12", "23"}, {+1, "12", "3"},
                        {+1, "13", "*"}, {-1, "13", "12"}, {-1, "13", "23"}, {+1, "13", "2"},
                        {+1, "23", "*"}, {-1, "23", "12"}, {-1, "23", "13"}, {+1, "23", "1"},
                        {+1, "*", ""}, {-1, "*", "1"}, {-1, "*", "2"}, {-1, "*", "3"},
                        {+1, "*", "12"}, {-1, "*", "13"}, {-1, "*", "23"}, {-1, "*", "*"}});
}

std::vector<SignedTerm> sorted(std::vector<SignedTerm> t) {
  std::sort(t.begin(), t.end(), [](const SignedTerm& x, const SignedTerm& y) {
    return std::tie(x.a, x.b, x.sign) < std::tie(y.a, y.b, y.sign);
  });
  return t;
}

TruncatedOperator product_operator(const LaurentSymbol& g, const LaurentSymbol& p, int degree) {
  TruncatedOperator tg = toeplitz_matrix(g, degree), tp = toeplitz_matrix(p, degree);
  return compose({{&tg, false}, {&tp, true}});
}

}  // namespace

TEST_CASE("coeff_condition examples") {
  CoeffConditionResult same = coeff_condition(scalar_monomial({1}), scalar_monomial({1}));
  CHECK_FALSE(same.verdict);
  CHECK(same.max_norm == doctest::Approx(1.0));
  REQUIRE_FALSE(same.witnesses.empty());
  CHECK(same.witnesses[0].variable == 0);

  CHECK(coeff_condition(scalar_monomial({1, 0}), scalar_monomial({0, 1})).verdict);
  CHECK(coeff_condition(LaurentSymbol::constant(1, mat({{2}})), scalar_monomial({3})).verdict);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 1 + seed % 3;
    auto [g, p] = random_product_pair(n, 2, 2, 2, false, seed);
    CoeffConditionResult r = coeff_condition(g, p);
    CHECK_FALSE(r.verdict);
    CHECK_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.size() <= CoeffConditionResult::kMaxWitnesses);
    // The witness names a real coefficient product.
    const CoeffWitness& w = r.witnesses[0];
    MultiIndex e = MultiIndex::unit(n, w.variable);
    CHECK(max_abs(g.coefficient(w.l + e) * p.coefficient(w.m + e).adjoint()) == doctest::Approx(w.norm));

    auto [g2, p2] = random_product_pair(n, 2, 2, 2, true, seed);
    CHECK(coeff_condition(g2, p2).verdict);
  }
  CHECK_THROWS_AS(coeff_condition(scalar_monomial({1}), scalar_monomial({1, 0})), DimensionMismatch);
}

TEST_CASE("point_condition examples") {
  PointConditionResult c = point_condition(LaurentSymbol::constant(1, mat({{1, 2}})), LaurentSymbol::monomial({1}, mat({{1, 1}})));
  CHECK(c.verdict);
  CHECK(c.residual == 0.0);

  PointConditionResult zz = point_condition(scalar_monomial({1}), scalar_monomial({1}), 20, 3);
  CHECK_FALSE(zz.verdict);
  // (lambda - 0)(mu - 0)^* for the worst sampled pair.
  CHECK(zz.residual == doctest::Approx(std::abs(zz.lambda[0]) * std::abs(zz.mu[0])));
  CHECK(zz.samples >= 20);
}

TEST_CASE("kernel compression condition") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    int n = 1 + seed % 3;
    int D = n == 3 ? 5 : 7;
    auto [g, p] = random_product_pair(n, 2, 2, 1, true, seed);
    KernelCompressionResult ok = kernel_compression_condition(g, p, D);
    CHECK(ok.constants_form.verdict);
    CHECK(ok.kernel_form.verdict);
    CHECK(ok.constants_form.residual <= 1e-12);
    CHECK(ok.kernel_form.residual <= 1e-12);
    CHECK(ok.agree);

    auto [gb, pb] = random_product_pair(n, 2, 2, 1, false, seed);
    KernelCompressionResult bad = kernel_compression_condition(gb, pb, D);
    CHECK_FALSE(bad.constants_form.verdict);
    CHECK_FALSE(bad.kernel_form.verdict);
    CHECK(bad.agree);
  }
  std::mt19937_64 rng(1);
  LaurentSymbol c = LaurentSymbol::constant(2, random_matrix(2, 2, rng));
  LaurentSymbol any = random_symbol(2, 2, 2, 2, true, 5, 4);
  CHECK(kernel_compression_condition(c, any, 6).kernel_form.residual == 0.0);
  CHECK(kernel_compression_condition(any, c, 6).kernel_form.residual == 0.0);
}

TEST_CASE("coefficient, point and truncation tests agree") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    int n = 1 + seed % 3;
    bool satisfy = seed % 2 == 0;
    auto [g, p] = random_product_pair(n, 2, 2, 1, satisfy, seed);
    bool a = coeff_condition(g, p).verdict;
    bool b = point_condition(g, p, 30, seed).verdict;
    bool c = check_toeplitz(product_operator(g, p, n == 3 ? 6 : 8)).verdict;
    CHECK(a == satisfy);
    CHECK(b == a);
    CHECK(c == a);
  }
}

TEST_CASE("one-variable decomposition") {
  Decomposition d = decompose_terms(1);
  REQUIRE(d.terms.size() == 3);
  CHECK(d.terms[0] == SignedTerm{+1, VarSet{}, VarSet{0}});
  CHECK(d.terms[1] == SignedTerm{+1, VarSet{0}, VarSet{}});
  CHECK(d.terms[2] == SignedTerm{-1, VarSet{0}, VarSet{0}});
  CHECK(render(d) == "+ M_Γ Ψ(0)^* + Γ(0) M_Ψ^* - Γ(0) Ψ(0)^*");
}

TEST_CASE("decompose_terms equals the closed form") {
  for (int n = 1; n <= 5; ++n) {
    Decomposition w = decompose_terms(n), c = closed_form_terms(n);
    int expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    CHECK(static_cast<int>(w.terms.size()) == expect);
    CHECK(sorted(w.terms) == sorted(c.terms));
    for (const auto& t : c.terms) {
      CHECK((t.a | t.b) == VarSet::all(n));
      CHECK(t.sign == ((t.a & t.b).count() % 2 ? -1 : 1));
    }
  }
}

TEST_CASE("render") {
  CHECK(render_term({+1, VarSet{0, 1}, VarSet{2}}, 3) == "+ M_{Γ_{1,2}} M_{Ψ_3}^*");
  CHECK(render_term({-1, VarSet{0, 1, 2}, VarSet{0}}, 3) == "- Γ(0) M_{Ψ_1}^*");
}

TEST_CASE("decomposition reconstructs the product") {
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    int n = 1 + seed % 3;
    int D = n == 3 ? 5 : 7;
    auto [g, p] = random_product_pair(n, 2, 2, 1, true, seed);
    Decomposition d = decompose(g, p);
    TruncatedOperator sum = decomposition_to_operator(d, g, p, D);
    VerificationReport r = compare_on_window(sum, product_operator(g, p, D), 1e-9);
    CHECK(r.verdict);
  }
  // n = 1 rank-one pair.
  LaurentSymbol g = LaurentSymbol::monomial({1}, mat({{1, 0}, {0, 0}})) + LaurentSymbol::constant(1, mat({{0.5, 0.5}, {0, 1}}));
  LaurentSymbol p = LaurentSymbol::monomial({1}, mat({{0, 1}, {0, 0}})) + LaurentSymbol::constant(1, mat({{1, 0}, {0.3, 0}}));
  REQUIRE(coeff_condition(g, p).verdict);
  VerificationReport r = compare_on_window(decomposition_to_operator(decompose(g, p), g, p, 10),
                                           product_operator(g, p, 10), 1e-10);
  CHECK(r.verdict);

  auto [gb, pb] = random_product_pair(2, 2, 2, 1, false, 3);
  CHECK_THROWS_AS(decompose(gb, pb), NotToeplitzProduct);
}

// With Gamma constant every restriction of Gamma is the same constant, so the
// decomposition must collapse to G M_Psi^*.  The printed tables do not.
TEST_CASE("constant-Gamma collapse separates the sign law from the printed tables") {
  std::mt19937_64 rng(5);
  for (int n : {2, 3}) {
    LaurentSymbol g = LaurentSymbol::constant(n, random_matrix(2, 2, rng));
    // Every monomial in {0,1}^n, so every restriction of Psi is nonzero.
    LaurentSymbol p(n, 2, 2);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      MultiIndex k = MultiIndex::zeros(n);
      for (int i : VarSet(mask).members()) k[i] = 1;
      p = p + LaurentSymbol::monomial(k, random_matrix(2, 2, rng));
    }
    const int D = 5;
    TruncatedOperator truth = product_operator(g, p, D);
    VerificationReport law = compare_on_window(decomposition_to_operator(closed_form_terms(n), g, p, D), truth, 1e-9);
    CHECK(law.verdict);
    Decomposition printed = n == 2 ? printed_bidisc() : printed_tridisc();
    CHECK(static_cast<int>(printed.terms.size()) == (n == 2 ? 9 : 27));
    VerificationReport tab = compare_on_window(decomposition_to_operator(printed, g, p, D), truth, 1e-9);
    CHECK_FALSE(tab.verdict);
    CHECK(tab.residual > 1e-3);
  }
}

TEST_CASE("printed tables differ from the sign law in exactly these terms") {
  auto mismatches = [](const Decomposition& printed) {
    std::vector<SignedTerm> law = closed_form_terms(printed.n).terms, out;
    for (const auto& t : printed.terms) {
      auto it = std::find_if(law.begin(), law.end(), [&](const SignedTerm& u) { return u.a == t.a && u.b == t.b; });
      REQUIRE(it != law.end());
      if (it->sign != t.sign) out.push_back(t);
    }
    return sorted(out);
  };
  std::vector<SignedTerm> bi = mismatches(printed_bidisc());
  CHECK(bi == sorted({{+1, vars("12", 2), vars("1", 2)},
                      {+1, vars("12", 2), vars("2", 2)},
                      {-1, vars("12", 2), vars("12", 2)}}));
  std::vector<SignedTerm> tri = mismatches(printed_tridisc());
  CHECK(tri == sorted({{-1, vars("123", 3), vars("13", 3)}, {-1, vars("123", 3), vars("23", 3)}}));
}

TEST_CASE("scalar disjointness") {
  ScalarDisjointResult r = scalar_disjoint_check(scalar_monomial({1, 1, 0}), scalar_monomial({0, 0, 1}));
  CHECK(r.verdict);
  CHECK(r.zeta_vars == VarSet{0, 1});
  CHECK(r.psi_vars == VarSet{2});
  CHECK_FALSE(scalar_disjoint_check(scalar_monomial({1, 0}), scalar_monomial({1, 0})).verdict);

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    int n = 1 + seed % 3;
    auto [g, p] = random_product_pair(n, 1, 1, 2, seed % 2 == 0, seed);
    CHECK(scalar_disjoint_check(g, p).verdict == coeff_condition(g, p).verdict);
  }

  // z_1 times conj(z_2) is Toeplitz with symbol z_1 zbar_2.
  TruncatedOperator prod = product_operator(scalar_monomial({1, 0}), scalar_monomial({0, 1}), 6);
  TruncatedOperator direct = toeplitz_matrix(scalar_monomial({1, -1}), 6);
  CHECK(compare_on_window(prod, direct, 0.0).verdict);
  CHECK(check_toeplitz(prod).verdict);
}
