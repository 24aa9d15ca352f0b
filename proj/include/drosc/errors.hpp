#pragma once

#include <stdexcept>
#include <string>

namespace drosc {

/// Argument outside the mathematical domain of an operation (e.g. y <= 0, Ei(0)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result would overflow double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Numerical failure: quadrature non-convergence, unphysical state, singular matrix.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The Fock truncation is too small to represent the state.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double tau, int dim)
      : std::runtime_error(what), tau_(tau), dim_(dim) {}

  double tau() const noexcept { return tau_; }
  int dim() const noexcept { return dim_; }

 private:
  double tau_;
  int dim_;
};

/// The Mufti ansatz left its validity region (z outside (0,1)).
class AnsatzError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Invalid run configuration; carries the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace drosc
