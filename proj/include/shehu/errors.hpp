#pragma once

#include <stdexcept>
#include <string>

namespace shehu {

// Root of every failure raised by the library. Each subclass names the
// condition callers are expected to branch on.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ContourError : Error { using Error::Error; };
struct CostBudgetError : Error { using Error::Error; };
struct MissingDerivative : Error { using Error::Error; };
struct MissingBoundary : Error { using Error::Error; };
struct SingularDenominator : Error { using Error::Error; };
struct SolveError : Error { using Error::Error; };
struct StabilityError : Error { using Error::Error; };
struct UnknownSuite : Error { using Error::Error; };

}  // namespace shehu
