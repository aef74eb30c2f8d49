#pragma once

#include <stdexcept>
#include <string>

namespace smoothdist {

// A documented precondition of an operation was violated by its caller.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A user-supplied configuration (CLI flags, literals) is unusable.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A request would exceed a configured memory or work budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed-point precision too low to certify the requested result.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An invariant that should hold exactly was observed to fail.
class AssertionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace smoothdist
