#pragma once

#include <stdexcept>
#include <string>

namespace sbmopa {

// Bad user input: malformed files, out-of-range parameters, inconsistent
// configuration. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical/solver failure: an LP that should be solvable came back
// infeasible, a certificate check failed, an iteration limit was hit.
// Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sbmopa
