#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace seam {

enum class ErrorKind {
    Format,       // malformed input file
    Validation,   // violated precondition / invariant
    Io,           // filesystem failure
    Schema,       // feature schema mismatch
    Config,       // bad configuration / usage
    Convergence,  // iterative solver gave up
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace seam
