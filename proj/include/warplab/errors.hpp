#pragma once

#include <stdexcept>
#include <string>

namespace warplab {

/// Argument outside the domain of a geometric quantity (r = 0, r >= Lambda, pole hit, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature / ODE / finite-difference failure.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank-deficient chart Jacobian or unknown builtin immersion.
class ImmersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degenerate cells or malformed resolution.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or expression parse/validation failure. `where` names the line or field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace warplab
