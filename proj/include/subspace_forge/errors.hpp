#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (shapes, non-orthonormal bases, bad files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside the domain of a construction (alpha = 1 for S, alpha >= n-1 for Phi+, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A relation that must hold by construction failed at runtime.
class ConsistencyError : public Error {
 public:
  ConsistencyError(std::string relation, double residual)
      : Error("internal consistency failure: " + relation + " (residual " +
              std::to_string(residual) + ")"),
        relation_(std::move(relation)),
        residual_(residual) {}

  const std::string& relation() const noexcept { return relation_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string relation_;
  double residual_;
};

/// A printed catalog formula does not satisfy the algebra relations it claims to.
class FormulaDiscrepancy : public Error {
 public:
  FormulaDiscrepancy(std::string item, std::string relation, double residual)
      : Error("formula-discrepancy in " + item + ": relation " + relation +
              " has residual " + std::to_string(residual)),
        item_(std::move(item)),
        relation_(std::move(relation)),
        residual_(residual) {}

  const std::string& item() const noexcept { return item_; }
  const std::string& relation() const noexcept { return relation_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string item_;
  std::string relation_;
  double residual_;
};

}  // namespace sforge
