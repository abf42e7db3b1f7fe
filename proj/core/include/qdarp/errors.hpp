#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace qdarp {

/// Input outside the physical or structural domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fixed-step integration lost more norm than the tolerance allows.
/// Carries the location of the failure when it happened inside a batch.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double norm_drift)
      : std::runtime_error(what), norm_drift_(norm_drift) {}

  double norm_drift() const noexcept { return norm_drift_; }

  std::optional<std::size_t> dot_index;
  std::optional<std::size_t> phi2_index;
  std::optional<std::size_t> area_index;

 private:
  double norm_drift_;
};

/// A derived quantity has no meaning for the given input (e.g. the
/// adiabaticity parameter of a drive that is zero everywhere).
class UndefinedParameterError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qdarp
