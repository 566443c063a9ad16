#pragma once

#include <stdexcept>
#include <string>

namespace specwb {

// Bad input: malformed domain, violated precondition, unparseable data.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidDomain : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Valid input, but the computation could not deliver (non-convergence,
// insufficient truncation, overflow).
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace specwb
