#pragma once

#include <stdexcept>

namespace gplab {

/// A configured size or depth cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a precondition of the requested operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gplab
