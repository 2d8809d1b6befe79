#pragma once

#include <vector>

#include "polytoep/product.hpp"
#include "polytoep/verify.hpp"

namespace polytoep {

/// Orthonormal polynomial vectors spanning ran Q minus sum_i z_i ran Q.
struct WanderingBasis {
  BasisPtr basis;
  /// Coefficient vectors in `basis` order.
  std::vector<Eigen::VectorXcd> vectors;
  int rank = 0;
  /// Column window of the wandering projection that was used.
  MultiIndex window;
  /// Max-entry norm of Gram - I.
  double gram_residual = 0.0;
};

/// Rank threshold on singular values of the wandering projection block.
inline constexpr double kRankThreshold = 1e-8;

/// Q = TT^*, symmetrized, after checking that T is a partial isometry and
/// that Q^2 = Q on the window.
TruncatedOperator range_projection(const TruncatedOperator& t, double tol = kOperatorTol);

/// Wandering vectors of ran Q, computed from the exact window columns of
/// sum_A (-1)^{|A|} S_A Q S_A^* by Gram-Schmidt in basis order.  Gates on
/// shift invariance and double commutation of ran Q.
WanderingBasis wandering_basis(const TruncatedOperator& q, double tol = kOperatorTol);

/// Theta whose j-th column is the j-th wandering vector.  Checks that Theta is
/// inner and, when Q is given, that M_Theta M_Theta^* = Q on the window.
LaurentSymbol assemble_inner(const WanderingBasis& wb, const TruncatedOperator* q = nullptr,
                             double tol = kOperatorTol);

struct Factorization {
  LaurentSymbol gamma;
  LaurentSymbol psi;
  /// Constant unitary aligning the co-range function: Psi = Psi_0 X^*.
  Matrix gauge;
  /// M_Gamma M_Psi^* - T on the window.
  VerificationReport reconstruction;
  /// M_Gamma M_Gamma^* - TT^* and M_Psi M_Psi^* - T^*T.
  VerificationReport range_gamma;
  VerificationReport range_psi;
  /// M_Gamma^* T M_{Psi_0} - X on the window.
  VerificationReport gauge_constancy;
  CoeffConditionResult coeff;

  double residual() const {
    return std::max({reconstruction.residual, range_gamma.residual, range_psi.residual});
  }
};

/// T = M_Gamma M_Psi^* with Gamma, Psi inner.
Factorization factor_partial_isometry(const TruncatedOperator& t, double tol = kOperatorTol);

struct AnalyticFactorization {
  LaurentSymbol gamma;
  /// Phi = Gamma V^*.
  Matrix v;
  /// Max coefficient distance of Phi and Gamma V^*.
  double residual = 0.0;
};

AnalyticFactorization analytic_factor(const LaurentSymbol& phi, int degree,
                                      double tol = kOperatorTol);

struct HyponormalFactorization {
  LaurentSymbol psi;
  LaurentSymbol theta;
  /// Largest coefficient of Psi^* Gamma at an exponent outside N^n.
  double negative_mass = 0.0;
  InnerCertificate theta_inner;
  /// M_Psi M_Theta M_Psi^* - T on the window.
  VerificationReport reconstruction;
};

/// T = M_Psi M_Theta M_Psi^* with Psi, Theta inner.  Requires T to be a
/// hyponormal partial isometry.
HyponormalFactorization hyponormal_factor(const TruncatedOperator& t, double tol = kOperatorTol);

struct NormalFactorization {
  LaurentSymbol psi;
  Matrix u;
  /// Mass of Theta away from the constant term.
  double nonconstant_mass = 0.0;
  /// Max-entry norm of U^*U - I.
  double unitarity_residual = 0.0;
  VerificationReport reconstruction;
};

/// T = M_Psi U M_Psi^* with U a constant unitary.
NormalFactorization normal_factor(const TruncatedOperator& t, double tol = kOperatorTol);

}  // namespace polytoep
