#pragma once

#include <optional>
#include <string>

#include "polytoep/multi_index.hpp"

namespace polytoep {

/// Outcome of one numerical check.  `witness` is non-empty iff the check
/// failed and names the offending basis entry or eigenvalue.
struct VerificationReport {
  std::string check;
  bool verdict = false;
  double residual = 0.0;
  std::optional<MultiIndex> window;
  double tolerance = 0.0;
  std::string witness;

  explicit operator bool() const { return verdict; }
};

inline VerificationReport make_report(std::string check, double residual, double tol,
                                      std::optional<MultiIndex> window,
                                      std::string witness_if_failing) {
  VerificationReport r;
  r.check = std::move(check);
  r.residual = residual;
  r.tolerance = tol;
  r.window = std::move(window);
  r.verdict = residual <= tol;
  if (!r.verdict) r.witness = std::move(witness_if_failing);
  return r;
}

}  // namespace polytoep
