#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polytoep/cli.hpp"
#include "polytoep/errors.hpp"
#include "polytoep/factor.hpp"
#include "polytoep/oracle.hpp"
#include "polytoep/product.hpp"
#include "polytoep/symbol_io.hpp"
#include "polytoep/verify.hpp"

namespace py = pybind11;
using namespace polytoep;

namespace {

MultiIndex to_index(const std::vector<int>& k) { return MultiIndex(k); }

std::vector<int> from_index(const MultiIndex& k) { return k.entries(); }

VarSet to_varset(const std::vector<int>& vars) {
  VarSet s;
  for (int v : vars) s = s.with(v);
  return s;
}

LaurentSymbol make_symbol(int n, int dim_out, int dim_in,
                          const std::vector<std::pair<std::vector<int>, Matrix>>& terms) {
  std::vector<std::pair<MultiIndex, Matrix>> t;
  for (const auto& [k, c] : terms) t.emplace_back(to_index(k), c);
  return LaurentSymbol(n, dim_out, dim_in, t);
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["name"] = r.check;
  d["verdict"] = r.verdict;
  d["residual"] = r.residual;
  d["window"] = r.window ? py::cast(r.window->entries()) : py::none();
  d["tolerance"] = r.tolerance;
  d["witness"] = r.witness.empty() ? py::none() : py::cast(r.witness);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Toeplitz operators with matrix Laurent-polynomial symbols on the polydisc";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error);
  py::register_exception<NotAnalytic>(m, "NotAnalytic", error);
  py::register_exception<WindowExhausted>(m, "WindowExhausted", error);
  py::register_exception<PreconditionFailed>(m, "PreconditionFailed", error);
  py::register_exception<InconclusiveTruncation>(m, "InconclusiveTruncation", error);
  py::register_exception<NotToeplitzProduct>(m, "NotToeplitzProduct", error);
  py::register_exception<FactorizationError>(m, "FactorizationError", error);
  py::register_exception<AliasingError>(m, "AliasingError", error);
  py::register_exception<ParseError>(m, "ParseError", error);

  py::class_<LaurentSymbol>(m, "Symbol")
      .def(py::init(&make_symbol), py::arg("n"), py::arg("dim_out"), py::arg("dim_in"),
           py::arg("terms"),
           "Build from a list of (exponent, coefficient matrix) pairs.")
      .def_static("constant", &LaurentSymbol::constant, py::arg("n"), py::arg("c"))
      .def_static(
          "monomial",
          [](const std::vector<int>& k, const Matrix& c) { return LaurentSymbol::monomial(to_index(k), c); },
          py::arg("k"), py::arg("c"))
      .def_static("from_json", [](const std::string& text) { return parse_symbol(text); })
      .def_static("read", &read_symbol, py::arg("path"))
      .def("to_json", &dump_symbol)
      .def("write", [](const LaurentSymbol& s, const std::string& path) { write_symbol(path, s); })
      .def_property_readonly("n", &LaurentSymbol::n)
      .def_property_readonly("dim_out", &LaurentSymbol::dim_out)
      .def_property_readonly("dim_in", &LaurentSymbol::dim_in)
      .def_property_readonly("terms",
                             [](const LaurentSymbol& s) {
                               std::vector<std::pair<std::vector<int>, Matrix>> out;
                               for (const auto& [k, c] : s.terms()) out.emplace_back(k.entries(), c);
                               return out;
                             })
      .def("coefficient", [](const LaurentSymbol& s, const std::vector<int>& k) { return s.coefficient(to_index(k)); })
      .def("is_analytic", &LaurentSymbol::is_analytic)
      .def("is_constant", &LaurentSymbol::is_constant)
      .def("band_radius", [](const LaurentSymbol& s) { return from_index(s.band_radius()); })
      .def("variables", [](const LaurentSymbol& s) { return s.variables().members(); })
      .def("__call__", [](const LaurentSymbol& s, const Point& z) { return eval(s, z); })
      .def("adjoint", &adjoint_symbol)
      .def("scaled", &LaurentSymbol::scaled)
      .def("restrict_zero",
           [](const LaurentSymbol& s, const std::vector<int>& vars) { return restrict_zero(s, to_varset(vars)); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__matmul__", [](const LaurentSymbol& a, const LaurentSymbol& b) { return multiply(a, b); })
      .def("__repr__", [](const LaurentSymbol& s) {
        return "<Symbol n=" + std::to_string(s.n()) + " " + std::to_string(s.dim_out()) + "x" +
               std::to_string(s.dim_in()) + " terms=" + std::to_string(s.terms().size()) + ">";
      });

  m.def("max_coefficient_distance", &max_coefficient_distance);
  m.def(
      "is_inner",
      [](const LaurentSymbol& s, double tol) {
        InnerCertificate c = is_inner(s, tol);
        return py::make_tuple(c.verdict, c.residual);
      },
      py::arg("theta"), py::arg("tol") = kSymbolTol);
  m.def(
      "is_partial_isometry_ae",
      [](const LaurentSymbol& s, int samples, double tol, std::uint64_t seed) {
        PointwisePartialIsometry r = is_partial_isometry_ae(s, samples, tol, seed);
        return py::make_tuple(r.verdict, r.exact_residual, r.sampled_residual);
      },
      py::arg("phi"), py::arg("samples") = 50, py::arg("tol") = kSymbolTol, py::arg("seed") = 0);
  m.def("random_inner", &random_inner, py::arg("n"), py::arg("dim_out"), py::arg("dim_in"),
        py::arg("exponent_bound"), py::arg("seed"));
  m.def("random_inner_pair", &random_inner_pair, py::arg("n"), py::arg("dim_out"), py::arg("dim_in"),
        py::arg("exponent_bound"), py::arg("seed"));
  m.def("random_product_pair", &random_product_pair, py::arg("n"), py::arg("dim_out"),
        py::arg("dim_in"), py::arg("degree"), py::arg("satisfy"), py::arg("seed"));

  py::class_<TruncatedOperator>(m, "Operator")
      .def_readonly("matrix", &TruncatedOperator::matrix)
      .def_readonly("provenance", &TruncatedOperator::provenance)
      .def_property_readonly("n", &TruncatedOperator::n)
      .def_property_readonly("degree", &TruncatedOperator::degree)
      .def_property_readonly("window", [](const TruncatedOperator& t) { return from_index(t.window()); })
      .def_property_readonly("band_radius", [](const TruncatedOperator& t) { return from_index(t.band_radius()); })
      .def("adjoint", &TruncatedOperator::adjoint)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__matmul__", [](const TruncatedOperator& a, const TruncatedOperator& b) { return a * b; });

  m.def(
      "toeplitz", [](const LaurentSymbol& s, int degree) { return toeplitz_matrix(s, degree); },
      py::arg("phi"), py::arg("degree"));
  m.def(
      "hankel",
      [](const LaurentSymbol& s, int degree) { return hankel_matrix(s, TruncationGrid::for_symbol(s, degree)); },
      py::arg("phi"), py::arg("degree"));
  m.def(
      "dft_toeplitz",
      [](const LaurentSymbol& s, int degree, int samples) {
        return dft_toeplitz(s, TruncationGrid::for_symbol(s, degree), samples);
      },
      py::arg("phi"), py::arg("degree"), py::arg("samples"));
  m.def(
      "svd_partial_isometry",
      [](const TruncatedOperator& t, double tol) {
        SvdClassification c = svd_partial_isometry(t, tol);
        return py::make_tuple(c.verdict, c.residual, c.singular_values);
      },
      py::arg("t"), py::arg("tol") = 1e-9);

  auto bind_check = [&m](const char* name, VerificationReport (*fn)(const TruncatedOperator&, double)) {
    m.def(
        name, [fn](const TruncatedOperator& t, double tol) { return report_dict(fn(t, tol)); },
        py::arg("t"), py::arg("tol") = kOperatorTol);
  };
  bind_check("check_toeplitz", &check_toeplitz);
  bind_check("check_isometry", &check_isometry);
  bind_check("check_unitary", &check_unitary);
  bind_check("check_partial_isometry", &check_partial_isometry);
  bind_check("check_hyponormal", &check_hyponormal);
  bind_check("check_normal", &check_normal);
  bind_check("check_range_shift_invariant", &check_range_shift_invariant);
  bind_check("check_range_doubly_commuting", &check_range_doubly_commuting);

  m.def(
      "coeff_condition",
      [](const LaurentSymbol& g, const LaurentSymbol& p, double tol) {
        CoeffConditionResult r = coeff_condition(g, p, tol);
        return py::make_tuple(r.verdict, r.max_norm);
      },
      py::arg("gamma"), py::arg("psi"), py::arg("tol") = kSymbolTol);
  m.def(
      "point_condition",
      [](const LaurentSymbol& g, const LaurentSymbol& p, int samples, std::uint64_t seed, double tol) {
        PointConditionResult r = point_condition(g, p, samples, seed, tol);
        return py::make_tuple(r.verdict, r.residual);
      },
      py::arg("gamma"), py::arg("psi"), py::arg("samples") = 50, py::arg("seed") = 0,
      py::arg("tol") = kSymbolTol);
  m.def(
      "decompose",
      [](const LaurentSymbol& g, const LaurentSymbol& p, double tol) {
        Decomposition d = decompose(g, p, tol);
        std::vector<py::tuple> out;
        for (const auto& t : d.terms) out.push_back(py::make_tuple(t.sign, t.a.members(), t.b.members()));
        return out;
      },
      py::arg("gamma"), py::arg("psi"), py::arg("tol") = kSymbolTol,
      "Signed terms (sign, vars zeroed in gamma, vars zeroed in psi), 0-based.");
  m.def(
      "render_decomposition", [](int n) { return render(decompose_terms(n)); }, py::arg("n"));

  m.def(
      "factor",
      [](const TruncatedOperator& t, double tol) {
        Factorization f = factor_partial_isometry(t, tol);
        return py::make_tuple(f.gamma, f.psi, f.residual());
      },
      py::arg("t"), py::arg("tol") = kOperatorTol,
      "Inner pair (gamma, psi) with T = M_gamma M_psi^*, plus the window residual.");

  m.def(
      "run_job",
      [](const std::string& sub, const std::vector<std::string>& inputs, int degree, double tol,
         int samples, std::uint64_t seed) {
        JobConfig c;
        c.subcommand = sub;
        c.inputs = inputs;
        c.degree = degree;
        c.tol = tol;
        c.samples = samples;
        c.seed = seed;
        JobResult r = run(c);
        return py::make_tuple(r.exit_code, render_report(r.report));
      },
      py::arg("subcommand"), py::arg("inputs") = std::vector<std::string>{},
      py::arg("degree") = 8, py::arg("tol") = 1e-9, py::arg("samples") = 50, py::arg("seed") = 0,
      "Run a CLI subcommand; returns (exit_code, JSON report text).");
}
