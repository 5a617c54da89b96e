#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A balance or correlation system could not be solved (non-ergodic or
/// otherwise rank-deficient model).
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// The correlation solution has entries below the nonnegativity slack.
class NegativeSolution : public Error {
public:
    using Error::Error;
};

/// Structurally malformed SHS model (bad dimensions, out-of-range states,
/// non-binary entries).
class InvalidModel : public Error {
public:
    using Error::Error;
};

class NonPositiveRate : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a closed-form expression or metric.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested operation is not defined for this policy (e.g. an SHS model
/// for a simulator-only baseline).
class UnsupportedPolicy : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Event inconsistent with the queue state (e.g. a completion while idle).
class IllegalEvent : public Error {
public:
    using Error::Error;
};

class NegativeElapsed : public Error {
public:
    using Error::Error;
};

}  // namespace aoi
