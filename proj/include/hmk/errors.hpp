#pragma once

#include <stdexcept>
#include <string>

namespace hmk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class BadArity : public Error {
public:
    using Error::Error;
};

/// A precondition on an argument was violated (wrong dimension, non-Hadamard input, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class SearchFailed : public Error {
public:
    using Error::Error;
};

class SearchTooLarge : public Error {
public:
    using Error::Error;
};

class NotCirculant : public Error {
public:
    using Error::Error;
};

/// Singular values sit too close to the rank threshold to call the rank.
class IllConditioned : public Error {
public:
    using Error::Error;
};

/// A staged expansion produced a residual above the consistency bound.
class Inconsistent : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace hmk
