#pragma once

#include <stdexcept>
#include <string>

namespace pulsekit {

// Error taxonomy mirrors the CLI exit codes: usage/precondition -> 1,
// data/format -> 2, numerical failure -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace pulsekit
