#pragma once

#include <stdexcept>
#include <string>

namespace quasipd {

/// Failure class of an operation. The CLI maps each kind onto a fixed exit code.
enum class ErrorKind {
    Input = 2,       // malformed or inconsistent input data
    Io = 3,          // file system failures
    Infeasible = 4,  // no parameter value satisfies the requested condition
    Numerical = 5,   // solver breakdown, singular systems, non-convergence
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace quasipd
