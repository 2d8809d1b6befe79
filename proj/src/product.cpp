#include "polytoep/product.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_pair(const LaurentSymbol& g, const LaurentSymbol& p, const std::string& what) {
  if (g.n() != p.n() || g.dim_out() != p.dim_out() || g.dim_in() != p.dim_in())
    throw DimensionMismatch(what + ": Gamma and Psi must have the same shape");
  if (!g.is_analytic() || !p.is_analytic())
    throw NotAnalytic(what + ": Gamma and Psi must be analytic");
}

Point zero_coordinate(Point z, int k) {
  z[k] = 0.0;
  return z;
}

// Diagonal projection keeping the monomials accepted by `keep`.
TruncatedOperator monomial_projection(const BasisPtr& basis, auto keep, const std::string& name) {
  Matrix m = Matrix::Zero(basis->size(), basis->size());
  for (int p = 0; p < basis->monomial_count(); ++p)
    if (keep(basis->monomial(p)))
      for (int f = 0; f < basis->dim(); ++f) m(basis->flat(p, f), basis->flat(p, f)) = 1.0;
  return operator_from_matrix(m, basis, basis, name);
}

std::string subscript(VarSet s) {
  std::string inner;
  for (int i : s.members()) inner += (inner.empty() ? "" : ",") + std::to_string(i + 1);
  return s.count() == 1 ? "_" + inner : "_{" + inner + "}";
}

}  // namespace

CoeffConditionResult coeff_condition(const LaurentSymbol& gamma, const LaurentSymbol& psi,
                                     double tol) {
  require_pair(gamma, psi, "coeff_condition");
  CoeffConditionResult out;
  std::vector<CoeffWitness> bad;
  const int n = gamma.n();
  for (const auto& [kl, a] : gamma.terms())
    for (const auto& [km, b] : psi.terms()) {
      bool shared = false;
      for (int i = 0; i < n && !shared; ++i) shared = kl[i] >= 1 && km[i] >= 1;
      if (!shared) continue;
      double norm = max_abs(a * b.adjoint());
      out.max_norm = std::max(out.max_norm, norm);
      if (norm <= tol) continue;
      for (int i = 0; i < n; ++i)
        if (kl[i] >= 1 && km[i] >= 1) {
          MultiIndex e = MultiIndex::unit(n, i);
          bad.push_back({i, kl - e, km - e, norm});
        }
    }
  std::stable_sort(bad.begin(), bad.end(),
                   [](const CoeffWitness& x, const CoeffWitness& y) { return x.norm > y.norm; });
  if (bad.size() > CoeffConditionResult::kMaxWitnesses) bad.resize(CoeffConditionResult::kMaxWitnesses);
  out.witnesses = std::move(bad);
  out.verdict = out.max_norm <= tol;
  return out;
}

PointConditionResult point_condition(const LaurentSymbol& gamma, const LaurentSymbol& psi,
                                     int samples, std::uint64_t seed, double tol) {
  require_pair(gamma, psi, "point_condition");
  const int n = gamma.n();
  std::vector<Point> lam = polydisc_samples(n, samples, 0.9, seed);
  std::vector<Point> mu = polydisc_samples(n, samples, 0.9, seed ^ 0x9e3779b97f4a7c15ULL);
  lam.push_back(Point(n, 0.0));
  mu.push_back(Point(n, 0.0));
  PointConditionResult out;
  out.samples = static_cast<int>(lam.size());
  out.lambda = lam.front();
  out.mu = mu.front();
  for (std::size_t s = 0; s < lam.size(); ++s)
    for (int k = 0; k < n; ++k) {
      Matrix dg = eval(gamma, lam[s]) - eval(gamma, zero_coordinate(lam[s], k));
      Matrix dp = eval(psi, mu[s]) - eval(psi, zero_coordinate(mu[s], k));
      double r = max_abs(dg * dp.adjoint());
      if (r > out.residual) {
        out.residual = r;
        out.variable = k;
        out.lambda = lam[s];
        out.mu = mu[s];
      }
    }
  out.verdict = out.residual <= tol;
  return out;
}

KernelCompressionResult kernel_compression_condition(const LaurentSymbol& gamma,
                                                     const LaurentSymbol& psi, int degree,
                                                     double tol) {
  require_pair(gamma, psi, "kernel_compression_condition");
  TruncationGrid grid = TruncationGrid::for_symbol(gamma, degree);
  TruncatedOperator mg = toeplitz_matrix(gamma, grid);
  TruncatedOperator mp = toeplitz_matrix(psi, grid);
  BasisPtr in = grid.col_basis();
  TruncatedOperator p0 =
      monomial_projection(in, [](const MultiIndex& k) { return k.is_zero(); }, "P0");

  auto run = [&](bool kernel_form) {
    std::vector<VerificationReport> parts;
    std::string name = kernel_form ? "kernel_compression_kernel" : "kernel_compression_constants";
    for (int i = 0; i < gamma.n(); ++i) {
      TruncatedOperator proj =
          kernel_form
              ? monomial_projection(in, [i](const MultiIndex& k) { return k[i] == 0; }, "K")
              : p0;
      TruncatedOperator s = shift_matrix(i, grid.row_basis());
      TruncatedOperator c =
          compose({{&s, true}, {&mg, false}, {&proj, false}, {&mp, true}, {&s, false}});
      TruncatedOperator zero = c;
      zero.matrix.setZero();
      VerificationReport r = compare_on_window(c, zero, tol, name);
      if (!r.verdict) r.witness = "i=" + std::to_string(i + 1) + ": " + r.witness;
      parts.push_back(std::move(r));
    }
    auto worst = std::max_element(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
      return x.residual < y.residual;
    });
    VerificationReport out = *worst;
    for (const auto& p : parts) out.window = cwise_min(*out.window, *p.window);
    return out;
  };
  KernelCompressionResult out;
  out.constants_form = run(false);
  out.kernel_form = run(true);
  out.agree = out.constants_form.verdict == out.kernel_form.verdict;
  return out;
}

Decomposition decompose_terms(int n) {
  if (n < 1 || n > 16) throw DimensionMismatch("decompose: n must be in [1, 16]");
  const VarSet all = VarSet::all(n);
  std::map<std::pair<VarSet, VarSet>, int> terms{{{VarSet{}, VarSet{}}, 1}};
  for (;;) {
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const auto& t) { return (t.first.first | t.first.second) != all; });
    if (it == terms.end()) break;
    auto [a, b] = it->first;
    int s = it->second;
    terms.erase(it);
    int k = 0;
    while ((a | b).contains(k)) ++k;
    auto add = [&](VarSet x, VarSet y, int c) {
      int& v = terms[{x, y}];
      v += c;
      if (v == 0) terms.erase({x, y});
    };
    add(a, b.with(k), s);
    add(a.with(k), b, s);
    add(a.with(k), b.with(k), -s);
  }
  Decomposition dec{n, {}};
  for (const auto& [ab, s] : terms) dec.terms.push_back({s, ab.first, ab.second});
  return dec;
}

Decomposition decompose(const LaurentSymbol& gamma, const LaurentSymbol& psi, double tol) {
  CoeffConditionResult cc = coeff_condition(gamma, psi, tol);
  if (!cc.verdict) {
    std::ostringstream os;
    os << "not a Toeplitz product: max |A_{l+e_i} B_{m+e_i}^*| = " << cc.max_norm;
    for (std::size_t w = 0; w < std::min<std::size_t>(3, cc.witnesses.size()); ++w) {
      const auto& x = cc.witnesses[w];
      os << "; i=" << x.variable + 1 << " l=" << x.l << " m=" << x.m << " norm=" << x.norm;
    }
    throw NotToeplitzProduct(os.str());
  }
  return decompose_terms(gamma.n());
}

Decomposition closed_form_terms(int n) {
  if (n < 1 || n > 16) throw DimensionMismatch("closed_form_terms: n must be in [1, 16]");
  Decomposition dec{n, {}};
  const std::uint32_t full = VarSet::all(n).bits();
  for (std::uint32_t a = 0; a <= full; ++a)
    for (std::uint32_t b = 0; b <= full; ++b) {
      if ((a | b) != full) continue;
      int overlap = std::popcount(a & b);
      dec.terms.push_back({overlap % 2 ? -1 : 1, VarSet(a), VarSet(b)});
    }
  std::sort(dec.terms.begin(), dec.terms.end(), [](const SignedTerm& x, const SignedTerm& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  return dec;
}

TruncatedOperator decomposition_to_operator(const Decomposition& dec, const LaurentSymbol& gamma,
                                            const LaurentSymbol& psi, int degree) {
  require_pair(gamma, psi, "decomposition_to_operator");
  if (dec.n != gamma.n()) throw DimensionMismatch("decomposition_to_operator: n mismatch");
  TruncationGrid grid = TruncationGrid::for_symbol(gamma, degree);
  std::map<VarSet, TruncatedOperator> tg, tp;
  auto get = [&](std::map<VarSet, TruncatedOperator>& cache, const LaurentSymbol& s, VarSet v) {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, toeplitz_matrix(restrict_zero(s, v), grid)).first;
    return &it->second;
  };
  std::optional<TruncatedOperator> acc;
  for (const SignedTerm& t : dec.terms) {
    TruncatedOperator term =
        compose({{get(tg, gamma, t.a), false}, {get(tp, psi, t.b), true}}).scaled(t.sign);
    acc = acc ? *acc + term : term;
  }
  if (!acc) {
    TruncatedOperator z = toeplitz_matrix(LaurentSymbol(gamma.n(), gamma.dim_out(), gamma.dim_out()),
                                          {gamma.n(), degree, gamma.dim_out(), gamma.dim_out()});
    return z;
  }
  acc->provenance = "decomposition";
  return *acc;
}

std::string render_term(const SignedTerm& t, int n) {
  const VarSet all = VarSet::all(n);
  std::string s = t.sign > 0 ? "+ " : "- ";
  if (std::abs(t.sign) != 1) s += std::to_string(std::abs(t.sign)) + " ";
  if (t.a == all)
    s += "Γ(0)";
  else
    s += t.a.empty() ? "M_Γ" : "M_{Γ" + subscript(t.a) + "}";
  s += " ";
  if (t.b == all)
    s += "Ψ(0)^*";
  else
    s += t.b.empty() ? "M_Ψ^*" : "M_{Ψ" + subscript(t.b) + "}^*";
  return s;
}

std::string render(const Decomposition& dec) {
  std::string out;
  for (const auto& t : dec.terms) out += (out.empty() ? "" : " ") + render_term(t, dec.n);
  return out;
}

ScalarDisjointResult scalar_disjoint_check(const LaurentSymbol& zeta, const LaurentSymbol& psi) {
  if (zeta.dim_out() != 1 || zeta.dim_in() != 1 || psi.dim_out() != 1 || psi.dim_in() != 1)
    throw DimensionMismatch("scalar_disjoint_check: scalar symbols required");
  if (zeta.n() != psi.n()) throw DimensionMismatch("scalar_disjoint_check: n mismatch");
  ScalarDisjointResult out;
  out.zeta_vars = zeta.variables();
  out.psi_vars = psi.variables();
  out.verdict = (out.zeta_vars & out.psi_vars).empty();
  return out;
}

}  // namespace polytoep
