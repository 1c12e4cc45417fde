#pragma once
// Error types. The CLI maps each kind to an exit code.

#include <stdexcept>
#include <string>

namespace ratkit {

enum class ErrorKind { input, contract, resource };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Malformed text, unknown symbol, bad option.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

// Precondition of an operation violated by the caller.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error(ErrorKind::contract, what) {}
};

// A configured cap was hit.
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error(ErrorKind::resource, what) {}
};

} // namespace ratkit
