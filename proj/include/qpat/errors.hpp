#pragma once

#include <stdexcept>
#include <string>

namespace qpat {

/// Process exit codes used by the command-line front end.
enum class ExitCode : int {
    ok = 0,
    config = 2,
    missing_input = 3,
    conformability = 4,
    numerical = 5,
};

/// Base class for recoverable errors; carries the exit code the CLI reports.
class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode code() const noexcept { return code_; }

private:
    ExitCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

class MissingInputError : public Error {
public:
    explicit MissingInputError(const std::string& what) : Error(ExitCode::missing_input, what) {}
};

class ConformabilityError : public Error {
public:
    explicit ConformabilityError(const std::string& what) : Error(ExitCode::conformability, what) {}
};

class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual = 0.0)
        : Error(ExitCode::numerical, what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Precondition violations (bad indices, invalid arguments). Programming errors.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace qpat
