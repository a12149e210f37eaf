#pragma once

#include <stdexcept>
#include <string>

namespace gsp {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    invalid_argument,
    numerical,
    io,
    config,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace gsp
