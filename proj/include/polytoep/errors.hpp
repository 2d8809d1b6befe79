#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "polytoep/multi_index.hpp"
#include "polytoep/report.hpp"

namespace polytoep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A symbol with negative exponents was passed where an analytic one is needed.
class NotAnalytic : public Error {
 public:
  using Error::Error;
};

/// The exactness window of a truncated computation is empty.
class WindowExhausted : public Error {
 public:
  WindowExhausted(const std::string& what, MultiIndex window, int degree)
      : Error(what + ": window exhausted " + window.to_string() +
              " at degree " + std::to_string(degree) +
              "; rerun with degree >= " +
              std::to_string(degree - window.min_entry())),
        window_(std::move(window)),
        minimal_degree_(degree - window_.min_entry()) {}

  const MultiIndex& window() const { return window_; }
  /// Smallest uniform degree cap for which the same window would be non-empty.
  int minimal_degree() const { return minimal_degree_; }

 private:
  MultiIndex window_;
  int minimal_degree_;
};

/// A gating check did not pass; the failing report is attached.
class PreconditionFailed : public Error {
 public:
  PreconditionFailed(const std::string& what, VerificationReport report)
      : Error(what + " (gate '" + report.check + "' failed, residual " +
              std::to_string(report.residual) + ")"),
        report_(std::move(report)) {}
  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

/// Factorization extracted something that does not hold at this truncation
/// (wandering vectors at the boundary, non-inner assembly, non-constant gauge).
class InconclusiveTruncation : public Error {
 public:
  using Error::Error;
};

/// M_Gamma M_Psi^* is not Toeplitz, so no elementary decomposition exists.
class NotToeplitzProduct : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// Quadrature grid too coarse for exact trigonometric integration.
class AliasingError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string path, int line, std::string field, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": field '" + field + "': " + msg),
        path_(std::move(path)),
        line_(line),
        field_(std::move(field)) {}
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string path_;
  int line_;
  std::string field_;
};

}  // namespace polytoep
