#pragma once

#include <stdexcept>

namespace esfr {

/// Input violates an operation's precondition (bad degree, zero hR entry, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The working precision cannot resolve the requested quantity.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physical-eigenvalue selection found two comparable candidates.
class AmbiguousEigenvalueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Time integration blew up.
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace esfr
