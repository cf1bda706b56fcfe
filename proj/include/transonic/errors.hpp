#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace transonic {

// Solver failures map to exit status 2, configuration failures to 1.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CavitationError : public SolverError {
public:
    using SolverError::SolverError;
};

class BranchSolveError : public SolverError {
public:
    using SolverError::SolverError;
};

class AdmissibilityError : public SolverError {
public:
    using SolverError::SolverError;
};

class IdentityViolation : public SolverError {
public:
    using SolverError::SolverError;
};

class TangentialSonicError : public SolverError {
public:
    using SolverError::SolverError;
};

class ConditionError : public SolverError {
public:
    using SolverError::SolverError;
};

class SingularSystemError : public SolverError {
public:
    using SolverError::SolverError;
};

class ContinuationDivergence : public SolverError {
public:
    using SolverError::SolverError;
};

class KappaExceeded : public SolverError {
public:
    using SolverError::SolverError;
};

class NoConvergence : public SolverError {
public:
    NoConvergence(const std::string& what, std::vector<double> ratios)
        : SolverError(what), ratios_(std::move(ratios)) {}
    const std::vector<double>& ratios() const { return ratios_; }

private:
    std::vector<double> ratios_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
    ParseError(int line, const std::string& what)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnknownKeyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace transonic
