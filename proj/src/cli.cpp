#include "polytoep/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "polytoep/errors.hpp"
#include "polytoep/factor.hpp"
#include "polytoep/product.hpp"
#include "polytoep/verify.hpp"

namespace polytoep {

namespace {

constexpr const char* kVersion = "0.1.0";

Json window_json(const std::optional<MultiIndex>& w) {
  if (!w) return nullptr;
  return w->entries();
}

Json record(const std::string& name, bool verdict, double residual, double tol,
            const std::optional<MultiIndex>& window, const std::string& witness) {
  Json r;
  r["name"] = name;
  r["verdict"] = verdict;
  r["residual"] = residual;
  r["window"] = window_json(window);
  r["tolerance"] = tol;
  r["witness"] = verdict ? Json(nullptr) : Json(witness);
  return r;
}

Json named(const std::string& name, VerificationReport r) {
  r.check = name;
  return report_to_json(r);
}

// Runs a check that may hit an exhausted window or a failed gate, turning the
// error into a failing record.
template <class F>
Json guarded(const std::string& name, double tol, F&& f) {
  try {
    return named(name, f());
  } catch (const WindowExhausted& e) {
    return record(name, false, std::nan(""), tol, e.window(), e.what());
  } catch (const PreconditionFailed& e) {
    return record(name, false, std::nan(""), tol, e.report().window, e.what());
  }
}

std::string point_to_string(const Point& z) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
  os << ")";
  return os.str();
}

Json coeff_record(const CoeffConditionResult& c, double tol) {
  std::string w;
  if (!c.witnesses.empty()) {
    const auto& x = c.witnesses.front();
    std::ostringstream os;
    os << "i=" << x.variable + 1 << " l=" << x.l << " m=" << x.m << " |A_{l+e_i} B_{m+e_i}^*|="
       << x.norm;
    w = os.str();
  }
  return record("coeff_condition", c.verdict, c.max_norm, tol, std::nullopt, w);
}

Json point_record(const PointConditionResult& p, double tol) {
  std::ostringstream os;
  os << "k=" << p.variable + 1 << " lambda=" << point_to_string(p.lambda)
     << " mu=" << point_to_string(p.mu);
  return record("point_condition", p.verdict, p.residual, tol, std::nullopt, os.str());
}

Json decomposition_json(const Decomposition& dec) {
  Json terms = Json::array();
  for (const auto& t : dec.terms) {
    Json j;
    j["sign"] = t.sign;
    std::vector<int> a, b;
    for (int i : t.a.members()) a.push_back(i + 1);
    for (int i : t.b.members()) b.push_back(i + 1);
    j["A"] = a;
    j["B"] = b;
    j["formula"] = render_term(t, dec.n);
    terms.push_back(std::move(j));
  }
  Json out;
  out["n"] = dec.n;
  out["terms"] = std::move(terms);
  out["formula"] = render(dec);
  return out;
}

void require_inputs(const JobConfig& c, std::size_t lo, std::size_t hi) {
  if (c.inputs.size() < lo || c.inputs.size() > hi)
    throw Error(c.subcommand + ": expected " + std::to_string(lo) +
                (lo == hi ? "" : "-" + std::to_string(hi)) + " symbol file(s), got " +
                std::to_string(c.inputs.size()));
}

TruncatedOperator product_operator(const LaurentSymbol& g, const LaurentSymbol& p, int degree) {
  TruncatedOperator mg = toeplitz_matrix(g, degree);
  TruncatedOperator mp = toeplitz_matrix(p, degree);
  return compose({{&mg, false}, {&mp, true}});
}

void run_check_toeplitz(const JobConfig& c, Json& records) {
  require_inputs(c, 1, 1);
  LaurentSymbol phi = read_symbol(c.inputs[0]);
  TruncatedOperator t = toeplitz_matrix(phi, c.degree);
  records.push_back(guarded("toeplitz", c.tol, [&] { return check_toeplitz(t, c.tol); }));
}

void run_check_product(const JobConfig& c, Json& records) {
  require_inputs(c, 2, 2);
  LaurentSymbol g = read_symbol(c.inputs[0]);
  LaurentSymbol p = read_symbol(c.inputs[1]);
  records.push_back(coeff_record(coeff_condition(g, p), kSymbolTol));
  records.push_back(point_record(point_condition(g, p, c.samples, c.seed), kSymbolTol));
  TruncatedOperator t = product_operator(g, p, c.degree);
  records.push_back(guarded("toeplitz", c.tol, [&] { return check_toeplitz(t, c.tol); }));
}

void run_decompose(const JobConfig& c, Json& report) {
  require_inputs(c, 2, 2);
  LaurentSymbol g = read_symbol(c.inputs[0]);
  LaurentSymbol p = read_symbol(c.inputs[1]);
  Json& records = report["records"];
  CoeffConditionResult cc = coeff_condition(g, p);
  records.push_back(coeff_record(cc, kSymbolTol));
  if (!cc.verdict) return;
  Decomposition dec = decompose(g, p);
  report["decomposition"] = decomposition_json(dec);
  TruncatedOperator rec = decomposition_to_operator(dec, g, p, c.degree);
  TruncatedOperator t = product_operator(g, p, c.degree);
  // Inserting "decomposition" may move the ordered storage; look records up again.
  report["records"].push_back(guarded(
      "reconstruction", c.tol, [&] { return compare_on_window(rec, t, c.tol, "reconstruction"); }));
}

void run_classify(const JobConfig& c, Json& records) {
  require_inputs(c, 1, 1);
  LaurentSymbol phi = read_symbol(c.inputs[0]);
  TruncatedOperator t = toeplitz_matrix(phi, c.degree);
  const bool square = phi.dim_out() == phi.dim_in();
  if (phi.is_analytic()) {
    InnerCertificate ic = is_inner(phi);
    records.push_back(record("inner", ic.verdict, ic.residual, kSymbolTol, std::nullopt,
                             "Theta^*Theta - I at " + ic.worst_index.to_string()));
  }
  PointwisePartialIsometry pw = is_partial_isometry_ae(phi, c.samples, kSymbolTol, c.seed);
  records.push_back(record("pointwise_partial_isometry", pw.verdict,
                           std::max(pw.exact_residual, pw.sampled_residual), kSymbolTol,
                           std::nullopt,
                           "exact " + std::to_string(pw.exact_residual) + ", sampled " +
                               std::to_string(pw.sampled_residual)));
  records.push_back(guarded("isometry", c.tol, [&] { return check_isometry(t, c.tol); }));
  if (square)
    records.push_back(guarded("unitary", c.tol, [&] { return check_unitary(t, c.tol); }));
  records.push_back(
      guarded("partial_isometry", c.tol, [&] { return check_partial_isometry(t, c.tol); }));
  if (square) {
    records.push_back(guarded("hyponormal", c.tol, [&] { return check_hyponormal(t, c.tol); }));
    records.push_back(guarded("normal", c.tol, [&] { return check_normal(t, c.tol); }));
  }
}

void run_factor(const JobConfig& c, Json& report) {
  require_inputs(c, 1, 2);
  TruncatedOperator t = [&] {
    if (c.inputs.size() == 1) return toeplitz_matrix(read_symbol(c.inputs[0]), c.degree);
    return product_operator(read_symbol(c.inputs[0]), read_symbol(c.inputs[1]), c.degree);
  }();
  Json& records = report["records"];
  Factorization f = factor_partial_isometry(t, c.tol);
  records.push_back(named("reconstruction", f.reconstruction));
  records.push_back(named("range_gamma", f.range_gamma));
  records.push_back(named("range_psi", f.range_psi));
  records.push_back(named("gauge_constancy", f.gauge_constancy));
  records.push_back(coeff_record(f.coeff, kSymbolTol));
  Json fj;
  fj["gamma"] = symbol_to_json(f.gamma);
  fj["psi"] = symbol_to_json(f.psi);
  report["factorization"] = std::move(fj);
}

Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

void run_selftest(const JobConfig& c, Json& records) {
  const double tol = c.tol;
  const int d = c.degree;
  // Theta(z) = [[0, z], [0, 0]]: partial isometry, not inner.
  LaurentSymbol theta = LaurentSymbol::monomial({1}, mat({{0, 1}, {0, 0}}));
  InnerCertificate ic = is_inner(theta);
  records.push_back(record("example_not_inner", !ic.verdict, ic.residual, kSymbolTol, std::nullopt,
                           "Theta was certified inner"));
  TruncatedOperator mt = toeplitz_matrix(theta, d);
  records.push_back(guarded("example_partial_isometry", tol,
                            [&] { return check_partial_isometry(mt, tol); }));

  // Phi(e^{it}) = [[e^{it}/2, sqrt(3)/2], [0, 0]]: pointwise partial isometry only.
  LaurentSymbol phi(1, 2, 2,
                    {{MultiIndex{1}, mat({{0.5, 0}, {0, 0}})},
                     {MultiIndex{0}, mat({{0, std::sqrt(3.0) / 2}, {0, 0}})}});
  PointwisePartialIsometry pw = is_partial_isometry_ae(phi, 100, kSymbolTol, c.seed);
  records.push_back(record("counterexample_pointwise", pw.verdict,
                           std::max(pw.exact_residual, pw.sampled_residual), kSymbolTol,
                           std::nullopt, "Phi Phi^* Phi != Phi pointwise"));
  VerificationReport cp = check_partial_isometry(toeplitz_matrix(phi, d), tol);
  records.push_back(record("counterexample_operator", !cp.verdict && cp.residual >= 0.1,
                           cp.residual, 0.1, cp.window, "T_Phi passed as a partial isometry"));

  // zeta = z1, psi = z2.
  LaurentSymbol z1 = LaurentSymbol::monomial({1, 0}, Matrix::Ones(1, 1));
  LaurentSymbol z2 = LaurentSymbol::monomial({0, 1}, Matrix::Ones(1, 1));
  records.push_back(coeff_record(coeff_condition(z1, z2), kSymbolTol));
  records.push_back(point_record(point_condition(z1, z2, c.samples, c.seed), kSymbolTol));
  TruncatedOperator prod = product_operator(z1, z2, d);
  records.push_back(guarded("disjoint_product_toeplitz", tol, [&] { return check_toeplitz(prod, tol); }));
  records.push_back(guarded("disjoint_product_symbol", tol, [&] {
    return compare_on_window(prod, toeplitz_matrix(multiply(z1, adjoint_symbol(z2)), d), tol,
                             "symbol");
  }));

  // One-variable decomposition: M_G Psi(0)^* + G(0) M_Psi^* - G(0) Psi(0)^*.
  Decomposition one = decompose_terms(1);
  Decomposition expected{1, {{1, VarSet{}, VarSet{0}}, {1, VarSet{0}, VarSet{}}, {-1, VarSet{0}, VarSet{0}}}};
  bool same = one.terms.size() == 3;
  for (const auto& t : expected.terms)
    same = same && std::find(one.terms.begin(), one.terms.end(), t) != one.terms.end();
  records.push_back(record("one_variable_decomposition", same, 0.0, 0.0, std::nullopt, render(one)));

  // T_{z zbar} = T_z T_zbar + H~^*_{zbar} H~_zbar.
  LaurentSymbol z = LaurentSymbol::monomial({1}, Matrix::Ones(1, 1));
  records.push_back(guarded("hankel_identity", 1e-10, [&] {
    return hankel_factor_identity_check(z, adjoint_symbol(z), d, 1e-10);
  }));

  // T = M_Psi U M_Psi^* with Psi = (0, z)^T, U = e^{i pi/4}.
  LaurentSymbol psi = LaurentSymbol::monomial({1}, mat({{0}, {1}}));
  Complex u = std::polar(1.0, std::numbers::pi / 4);
  TruncatedOperator mp = toeplitz_matrix(psi, d);
  TruncatedOperator tn = compose({{&mp, false}, {&mp, true}}).scaled(u);
  try {
    NormalFactorization nf = normal_factor(tn, tol);
    bool unimodular = nf.u.size() == 1 && std::abs(std::abs(nf.u(0, 0)) - 1.0) <= tol;
    records.push_back(record("normal_factor", nf.reconstruction.verdict && unimodular,
                             nf.reconstruction.residual, tol, nf.reconstruction.window,
                             nf.reconstruction.witness));
  } catch (const Error& e) {
    records.push_back(record("normal_factor", false, std::nan(""), tol, std::nullopt, e.what()));
  }
}

}  // namespace

int default_degree() {
  if (const char* env = std::getenv(kDegreeEnv)) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 64) return static_cast<int>(v);
  }
  return 8;
}

Json report_to_json(const VerificationReport& r) {
  return record(r.check, r.verdict, r.residual, r.tolerance, r.window, r.witness);
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

JobResult run(const JobConfig& c) {
  if (c.degree < 1) throw Error("degree must be >= 1");
  if (!(c.tol > 0)) throw Error("tolerance must be positive");
  if (c.samples < 1) throw Error("sample count must be >= 1");

  JobResult out;
  Json& rep = out.report;
  rep["tool"] = "polytoep";
  rep["version"] = kVersion;
  Json cfg;
  cfg["subcommand"] = c.subcommand;
  cfg["inputs"] = c.inputs;
  cfg["degree"] = c.degree;
  cfg["tol"] = c.tol;
  cfg["samples"] = c.samples;
  cfg["seed"] = c.seed;
  rep["config"] = std::move(cfg);
  rep["records"] = Json::array();

  const std::string& s = c.subcommand;
  if (s == "check-toeplitz")
    run_check_toeplitz(c, rep["records"]);
  else if (s == "check-product")
    run_check_product(c, rep["records"]);
  else if (s == "decompose")
    run_decompose(c, rep);
  else if (s == "classify")
    run_classify(c, rep["records"]);
  else if (s == "factor")
    run_factor(c, rep);
  else if (s == "selftest")
    run_selftest(c, rep["records"]);
  else
    throw Error("unknown subcommand '" + s + "'");

  bool all = true;
  for (const auto& r : rep["records"]) all = all && r["verdict"].get<bool>();
  rep["all_passed"] = all;
  out.exit_code = (all || s == "classify") ? 0 : 1;
  return out;
}

}  // namespace polytoep
