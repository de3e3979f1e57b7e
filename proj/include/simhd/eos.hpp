#ifndef SIMHD_EOS_HPP
#define SIMHD_EOS_HPP

#include "simhd/errors.hpp"

namespace simhd {

// Equation of state e = e(p, rho) together with the derived thermodynamic
// quantities the solver needs. Only the ideal gas law is shipped, but all
// solver code goes through this interface: any EOS whose specific internal
// energy is non-negative and non-decreasing in p (at fixed rho) works with
// the pressure solver unchanged.
//
// For the ideal gas:  e = p / ((gamma-1) rho),  p/rho = R T,  e = c_v T,
// with R = (gamma-1) c_v.
class Eos {
public:
    enum class Kind { IdealGas };

    explicit Eos(double gamma = 1.4, double c_v = 1.0)
        : kind_(Kind::IdealGas), gamma_(gamma), c_v_(c_v) {
        if (gamma <= 1.0) throw ConfigError("EOS requires gamma > 1");
        if (c_v <= 0.0) throw ConfigError("EOS requires c_v > 0");
    }

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double c_v() const { return c_v_; }
    double gas_constant() const { return (gamma_ - 1.0) * c_v_; }

    // Specific internal energy e(p, rho).
    double internal_energy(double p, double rho) const {
        require_positive_density(rho);
        return p / ((gamma_ - 1.0) * rho);
    }

    // Inverse of internal_energy in p: p(e, rho).
    double pressure_from_energy(double e, double rho) const {
        require_positive_density(rho);
        return (gamma_ - 1.0) * rho * e;
    }

    // h = e + p/rho.
    double enthalpy(double p, double rho) const {
        return internal_energy(p, rho) + p / rho;
    }

    // Adiabatic sound speed squared, c^2 = gamma p / rho for the ideal gas.
    double sound_speed_sq(double p, double rho) const {
        require_positive_density(rho);
        return gamma_ * p / rho;
    }

    // Thermal equation of state, T = p / (R rho).
    double temperature(double p, double rho) const {
        require_positive_density(rho);
        double R = gas_constant();
        if (R == 0.0) throw ConfigError("temperature undefined for R = 0");
        return p / (R * rho);
    }

    // d e / d p at fixed rho. Newton derivative of the diagonal EOS
    // nonlinearity in the pressure system; must be >= 0.
    double de_dp(double p, double rho) const {
        (void)p;
        require_positive_density(rho);
        return 1.0 / ((gamma_ - 1.0) * rho);
    }

private:
    void require_positive_density(double rho) const {
        if (!(rho > 0.0))
            throw AdmissibilityError("EOS called with non-positive density", rho);
    }

    Kind kind_;
    double gamma_;
    double c_v_;
};

} // namespace simhd

#endif
