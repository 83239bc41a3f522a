#ifndef QSEL_ERRORS_HPP
#define QSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qsel {

// Base class for all qsel errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, wrong types, missing keys).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally sound input that violates a model or config invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Filesystem problems: unreadable input, unwritable output.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qsel

#endif  // QSEL_ERRORS_HPP
