#pragma once

#include <stdexcept>
#include <string>

namespace iwlambda {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violated: ramified prime, p dividing the conductor, singular matrix, ...
struct DomainError : Error {
    using Error::Error;
};

// Not enough p-adic digits survive to decide a valuation.
struct PrecisionExhausted : Error {
    using Error::Error;
};

// A generalized Bernoulli number that should be p-integral is not.
struct NonIntegrality : Error {
    using Error::Error;
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct MethodDisagreement : Error {
    using Error::Error;
};

}  // namespace iwlambda
