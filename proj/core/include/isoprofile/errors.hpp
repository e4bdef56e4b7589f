#pragma once

#include <stdexcept>
#include <string>

namespace isoprofile {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A bracketing root solve was asked for a target outside [f(lo), f(hi)].
class BracketError : public DomainError {
 public:
  explicit BracketError(const std::string& what) : DomainError(what) {}
};

/// An iterative scheme hit its depth/iteration cap before reaching tolerance.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// The curvature-smallness regime required by the comparison bounds is left.
class SmallnessViolation : public std::runtime_error {
 public:
  explicit SmallnessViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isoprofile
