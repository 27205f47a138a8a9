#pragma once

#include <stdexcept>
#include <string>

namespace hybridcell {

/// Failure category. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    Domain = 3,       ///< argument outside the operation's domain
    Numerical = 4,    ///< root finder or linear solver failed
    Config = 2,       ///< malformed or inconsistent configuration
    Convergence = 5,  ///< value iteration hit its iteration cap
    Contract = 6,     ///< caller broke a documented precondition
    Io = 7,           ///< file could not be read or written
};

const char* category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCategory::Domain, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCategory::Numerical, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::Config, what) {}
};

class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what) : Error(ErrorCategory::Contract, what) {}
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(ErrorCategory::Io, path + ": " + what), path_(path) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Value iteration ran out of iterations. Carries the last sup-norm change.
class ConvergenceError : public Error {
public:
    ConvergenceError(int iterations, double last_delta)
        : Error(ErrorCategory::Convergence,
                "value iteration did not converge after " + std::to_string(iterations) +
                    " iterations (last sup-norm delta " + std::to_string(last_delta) + ")"),
          iterations_(iterations), last_delta_(last_delta) {}

    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double last_delta() const noexcept { return last_delta_; }

private:
    int iterations_;
    double last_delta_;
};

inline const char* category_name(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::Domain: return "domain";
    case ErrorCategory::Numerical: return "numerical";
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Convergence: return "convergence";
    case ErrorCategory::Contract: return "contract";
    case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

} // namespace hybridcell
