#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polytoep/multi_index.hpp"

namespace polytoep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Point = std::vector<Complex>;

/// Coefficients whose max-entry norm is at or below this are dropped.
inline constexpr double kCanonicalDrop = 1e-14;
/// Default tolerance for symbol-level identities (max-entry norm).
inline constexpr double kSymbolTol = 1e-10;

/// Matrix-valued trigonometric polynomial  Phi(z) = sum_k C_k z^k,  k in Z^n,
/// with C_k of shape dim_out x dim_in.  Immutable once built; the stored term
/// map never contains a (numerically) zero coefficient.
class LaurentSymbol {
 public:
  using TermMap = std::map<MultiIndex, Matrix>;

  /// The zero symbol.
  LaurentSymbol(int n, int dim_out, int dim_in);
  /// Sums repeated exponents, then drops negligible coefficients.
  LaurentSymbol(int n, int dim_out, int dim_in,
                const std::vector<std::pair<MultiIndex, Matrix>>& terms);

  static LaurentSymbol constant(int n, const Matrix& c);
  static LaurentSymbol monomial(const MultiIndex& k, const Matrix& c);

  int n() const { return n_; }
  int dim_out() const { return dim_out_; }
  int dim_in() const { return dim_in_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Every exponent lies in N^n.
  bool is_analytic() const;
  /// d_i = max |k_i| over the support.
  MultiIndex band_radius() const;
  /// Largest positive exponent per variable (0 if none).
  MultiIndex upward_reach() const;
  /// Largest negated negative exponent per variable (0 if none).
  MultiIndex downward_reach() const;
  /// Variables that occur with a nonzero exponent somewhere in the support.
  VarSet variables() const;

  /// Coefficient at k, or the zero matrix.
  Matrix coefficient(const MultiIndex& k) const;

  LaurentSymbol operator+(const LaurentSymbol& o) const;
  LaurentSymbol operator-(const LaurentSymbol& o) const;
  LaurentSymbol scaled(Complex s) const;
  /// Phi(z) * C for a constant matrix C.
  LaurentSymbol right_multiply(const Matrix& c) const;
  /// C * Phi(z) for a constant matrix C.
  LaurentSymbol left_multiply(const Matrix& c) const;

 private:
  int n_;
  int dim_out_;
  int dim_in_;
  TermMap terms_;
};

/// Max-entry norm of Phi - Psi over all coefficients.
double max_coefficient_distance(const LaurentSymbol& a, const LaurentSymbol& b);

/// Sum_k C_k z^k at a point.  Throws on dimension mismatch, or when a zero
/// coordinate meets a negative exponent.
Matrix eval(const LaurentSymbol& phi, const Point& z);

/// Boundary adjoint: coefficient at k is C_{-k}^*; dims swap.
LaurentSymbol adjoint_symbol(const LaurentSymbol& phi);

/// Coefficient convolution: (Phi Psi)^(m) = sum_k Phi^(k) Psi^(m - k).
LaurentSymbol multiply(const LaurentSymbol& phi, const LaurentSymbol& psi);

/// Keeps exactly the terms with k_i = 0 for all i in `vars`, i.e. the symbol
/// with those variables set to 0.  Rejects non-analytic input.
LaurentSymbol restrict_zero(const LaurentSymbol& phi, VarSet vars);

struct InnerCertificate {
  bool verdict = false;
  /// Max-entry norm of Theta^* Theta - delta_0 I.
  double residual = 0.0;
  /// Exponent where the residual is attained.
  MultiIndex worst_index;
};

/// Exact polynomial test of Theta^*(z) Theta(z) = I on the torus.
InnerCertificate is_inner(const LaurentSymbol& theta, double tol = kSymbolTol);

struct PointwisePartialIsometry {
  bool verdict = false;
  /// Max-entry norm of the Laurent polynomial Phi Phi^* Phi - Phi.
  double exact_residual = 0.0;
  /// Max over sampled torus points of |Phi Phi^* Phi - Phi|_max.
  double sampled_residual = 0.0;
  int samples = 0;
};

/// Is Phi(e^{i theta}) a partial isometry for (almost) every theta?
PointwisePartialIsometry is_partial_isometry_ae(const LaurentSymbol& phi, int sample_count,
                                                double tol = kSymbolTol,
                                                std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Generators.  All are deterministic in `seed`.

/// `count` points on the torus T^n with uniform angles.
std::vector<Point> torus_samples(int n, int count, std::uint64_t seed);
/// `count` points in the polydisc with each coordinate uniform in the disc of
/// the given radius.
std::vector<Point> polydisc_samples(int n, int count, double radius, std::uint64_t seed);

/// Theta(z) = V diag(z^{alpha_j}) W with V a constant isometry (dim_out x dim_in),
/// W a constant unitary and alpha_j in [0, exponent_bound]^n.
LaurentSymbol random_inner(int n, int dim_out, int dim_in, int exponent_bound,
                           std::uint64_t seed);

/// Inner pair (Gamma, Psi) = (V1 diag(z^alpha) W, V2 diag(z^beta) W) where
/// alpha_j and beta_j use disjoint variables for every j, so M_Gamma M_Psi^*
/// is a partially isometric Toeplitz operator.
std::pair<LaurentSymbol, LaurentSymbol> random_inner_pair(int n, int dim_out, int dim_in,
                                                          int exponent_bound,
                                                          std::uint64_t seed);

/// Random analytic pair with per-variable degree <= `degree`.  When `satisfy`
/// holds, every product of e_i-shifted coefficients vanishes exactly: shared
/// variables carry rank-one coefficients x y^* (Gamma) and w v^* (Psi) with
/// y orthogonal to v.  Otherwise at least one such product has max-entry norm
/// >= 0.1.
std::pair<LaurentSymbol, LaurentSymbol> random_product_pair(int n, int dim_out, int dim_in,
                                                            int degree, bool satisfy,
                                                            std::uint64_t seed);

/// Random Laurent (or analytic) symbol with exponents in [-degree, degree]^n
/// (resp. [0, degree]^n) and up to `max_terms` terms.
LaurentSymbol random_symbol(int n, int dim_out, int dim_in, int degree, bool analytic,
                            int max_terms, std::uint64_t seed);

}  // namespace polytoep
