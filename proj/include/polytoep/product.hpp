#pragma once

#include <string>
#include <vector>

#include "polytoep/report.hpp"
#include "polytoep/trunc.hpp"

namespace polytoep {

// Products M_Gamma M_Psi^* of analytic multiplication operators: when they are
// Toeplitz, and how they split into elementary Toeplitz terms
// M_{Gamma_A} M_{Psi_B}^*, where Gamma_A is Gamma with the variables in A set to 0.

struct CoeffWitness {
  int variable = 0;  // 0-based
  MultiIndex l;      // Gamma coefficient index is l + e_variable
  MultiIndex m;      // Psi coefficient index is m + e_variable
  double norm = 0.0;
};

struct CoeffConditionResult {
  bool verdict = false;
  double max_norm = 0.0;
  /// Largest violations first, at most kMaxWitnesses of them.
  std::vector<CoeffWitness> witnesses;
  static constexpr std::size_t kMaxWitnesses = 16;
};

/// A_{l+e_i} B_{m+e_i}^* = 0 for every i and all l, m in N^n, where A and B
/// are the coefficients of Gamma and Psi.
CoeffConditionResult coeff_condition(const LaurentSymbol& gamma, const LaurentSymbol& psi,
                                     double tol = kSymbolTol);

struct PointConditionResult {
  bool verdict = false;
  double residual = 0.0;
  int variable = 0;
  Point lambda;
  Point mu;
  int samples = 0;
};

/// max over k and sampled (lambda, mu) of
/// |(Gamma(lambda) - Gamma_k(lambda)) (Psi(mu) - Psi_k(mu))^*|.  Points are
/// uniform in the polydisc of radius 0.9; the zero pair is always included.
PointConditionResult point_condition(const LaurentSymbol& gamma, const LaurentSymbol& psi,
                                     int samples = 50, std::uint64_t seed = 0,
                                     double tol = kSymbolTol);

struct KernelCompressionResult {
  /// M_{z_i}^* M_Gamma P_0 M_Psi^* M_{z_i} = 0 (P_0: constants).
  VerificationReport constants_form;
  /// M_{z_i}^* M_Gamma P_{ker M_{z_i}^*} M_Psi^* M_{z_i} = 0.
  VerificationReport kernel_form;
  bool agree = false;
};

KernelCompressionResult kernel_compression_condition(const LaurentSymbol& gamma,
                                                     const LaurentSymbol& psi, int degree,
                                                     double tol = 1e-9);

struct SignedTerm {
  int sign = 1;
  VarSet a;  // variables zeroed in Gamma
  VarSet b;  // variables zeroed in Psi

  friend bool operator==(const SignedTerm&, const SignedTerm&) = default;
};

struct Decomposition {
  int n = 0;
  /// Sorted by (A, B); no two terms share (A, B).
  std::vector<SignedTerm> terms;
};

/// Rewrite  Gamma_A Psi_B^* -> Gamma_A Psi_{B+k}^* + Gamma_{A+k} Psi_B^* - Gamma_{A+k} Psi_{B+k}^*
/// starting from (+, {}, {}), always on the smallest variable k outside A u B,
/// combining like terms until every term has A u B = {1..n}.
Decomposition decompose_terms(int n);
/// decompose_terms after checking coeff_condition; throws NotToeplitzProduct
/// with the leading witnesses otherwise.
Decomposition decompose(const LaurentSymbol& gamma, const LaurentSymbol& psi,
                        double tol = kSymbolTol);
/// All 3^n pairs with A u B = {1..n}, signed (-1)^{|A n B|}.
Decomposition closed_form_terms(int n);

/// Sum of sign * T(Gamma_A) T(Psi_B)^*.
TruncatedOperator decomposition_to_operator(const Decomposition& dec, const LaurentSymbol& gamma,
                                            const LaurentSymbol& psi, int degree);

/// "+ M_{Γ_{1,2}} M_{Ψ_3}^*"; Γ_{1..n} is written Γ(0) and Ψ_{1..n}^* as Ψ(0)^*.
std::string render_term(const SignedTerm& t, int n);
std::string render(const Decomposition& dec);

struct ScalarDisjointResult {
  bool verdict = false;
  VarSet zeta_vars;
  VarSet psi_vars;
};

/// Scalar symbols: no variable is used by both.
ScalarDisjointResult scalar_disjoint_check(const LaurentSymbol& zeta, const LaurentSymbol& psi);

}  // namespace polytoep
