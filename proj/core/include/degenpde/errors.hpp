#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace degenpde {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A derived constant needs a real power of a negative base with a
/// non-integer exponent, or a division by an exact zero.
class UndefinedConstantError : public Error {
public:
    UndefinedConstantError(std::string symbol, const std::string& why)
        : Error("undefined constant '" + symbol + "': " + why), symbol_(std::move(symbol)) {}

    const std::string& symbol() const noexcept { return symbol_; }

private:
    std::string symbol_;
};

/// Argument outside the domain of the selected formula branch.
class DomainError : public Error {
public:
    using Error::Error;
};

class RootNotFoundError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace degenpde
