#pragma once

#include <stdexcept>
#include <string>

namespace casimir_bec {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or incomplete user configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Tabulated data queried outside its grid.
class ExtrapolationError : public Error {
public:
    using Error::Error;
};

// BdG spectrum with genuinely complex eigenvalues.
class InstabilityError : public Error {
public:
    using Error::Error;
};

// Inputs that are individually valid but inconsistent with each other.
class ContractError : public Error {
public:
    using Error::Error;
};

class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace casimir_bec
