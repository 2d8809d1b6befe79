#pragma once

#include "polytoep/report.hpp"
#include "polytoep/trunc.hpp"

namespace polytoep {

/// Default tolerance for operator identities (max-entry norm).
inline constexpr double kOperatorTol = 1e-9;

/// Brown-Halmos test  M_{z_i}^* T M_{z_i} = T  for every i, on the window.
VerificationReport check_toeplitz(const TruncatedOperator& t, double tol = kOperatorTol);

/// T^*T = I on the window.
VerificationReport check_isometry(const TruncatedOperator& t, double tol = kOperatorTol);
/// T^*T = I and TT^* = I on the window.
VerificationReport check_unitary(const TruncatedOperator& t, double tol = kOperatorTol);
/// TT^*T = T on the window.
VerificationReport check_partial_isometry(const TruncatedOperator& t, double tol = kOperatorTol);
/// Smallest eigenvalue of the window block of T^*T - TT^* (Hermitian part);
/// residual max(0, -lambda_min).
VerificationReport check_hyponormal(const TruncatedOperator& t, double tol = kOperatorTol);
/// T^*T - TT^* = 0 on the window.
VerificationReport check_normal(const TruncatedOperator& t, double tol = kOperatorTol);

/// T_{FG} - T_F T_G - H~^*_{F^*} H~_G on the window, where H~ is the
/// un-rotated Hankel operator.
VerificationReport hankel_factor_identity_check(const LaurentSymbol& f, const LaurentSymbol& g,
                                                int degree, double tol = 1e-10);

/// Q = TT^*, symmetrized.
TruncatedOperator range_projection_of(const TruncatedOperator& t);

/// (I - Q) M_{z_i} Q = 0 on the window for every i, for a projection Q.
VerificationReport projection_shift_invariant(const TruncatedOperator& q, double tol = kOperatorTol);
/// Q (R_i^* R_j - R_j R_i^*) Q = 0 for i < j, with R_i = Q M_{z_i} Q.  Throws
/// PreconditionFailed unless ran Q is shift invariant.  Passes trivially for n = 1.
VerificationReport projection_doubly_commuting(const TruncatedOperator& q, double tol = kOperatorTol);

/// Shift invariance of ran T.  Throws PreconditionFailed unless T passes
/// check_partial_isometry.
VerificationReport check_range_shift_invariant(const TruncatedOperator& t, double tol = kOperatorTol);
/// Double commutation of the shift restrictions to ran T.  Gates on
/// check_partial_isometry, then on shift invariance.
VerificationReport check_range_doubly_commuting(const TruncatedOperator& t, double tol = kOperatorTol);

}  // namespace polytoep
