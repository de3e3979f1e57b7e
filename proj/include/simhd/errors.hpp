#ifndef SIMHD_ERRORS_HPP
#define SIMHD_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace simhd {

// Physically inadmissible state (negative density, negative internal
// energy, negative interface enthalpy). Carries the offending location
// and value so drivers can report which cell went bad.
class AdmissibilityError : public std::runtime_error {
public:
    AdmissibilityError(const std::string& what, double value,
                       int i = -1, int j = -1)
        : std::runtime_error(what + " (value=" + std::to_string(value) +
                             " at cell i=" + std::to_string(i) +
                             ", j=" + std::to_string(j) + ")"),
          value(value), i(i), j(j) {}

    double value;
    int i, j;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver failure; keeps the residual history for diagnostics.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residual_history(std::move(residuals)) {}

    std::vector<double> residual_history;
};

} // namespace simhd

#endif
