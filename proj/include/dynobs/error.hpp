#pragma once

#include <stdexcept>
#include <string>

namespace dynobs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition or argument-domain violation.
class DomainError : public Error {
public:
    using Error::Error;
};

// An iteration, memory or enumeration budget was exhausted.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// A projective image had no unit coordinate modulo a prime power.
class BadReduction : public Error {
public:
    using Error::Error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace dynobs
