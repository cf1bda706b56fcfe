#pragma once

namespace transonic {

// Polytropic gas p = kappa * rho^gamma with Bernoulli constant c0.
struct GasModel {
    double gamma = 1.4;
    double kappa = 1.0;
    double c0 = 4.2;

    // c0 chosen so that the sonic density is 1.
    static GasModel with_unit_sonic_density(double gamma, double kappa);

    double critical_speed_sq() const { return 2.0 * (gamma - 1.0) * c0 / (gamma + 1.0); }
    double critical_density() const;
    // Largest q^2 before the density vanishes.
    double cavitation_speed_sq() const { return 2.0 * c0; }

    void validate() const;  // throws std::invalid_argument
};

struct BernoulliState {
    double rho;
    double c_sq;
};

// Throws CavitationError when q_sq >= 2 c0.
BernoulliState bernoulli_state(const GasModel& gas, double q_sq);

// Left side of the Bernoulli law, q^2/2 + kappa gamma/(gamma-1) rho^(gamma-1); equals c0 on states.
double bernoulli_energy(const GasModel& gas, double q_sq, double rho);

struct Nozzle {
    double n0 = 1.0;
    double a_quad = 0.1;
    void validate() const;  // throws std::invalid_argument
};

struct NozzleValue {
    double n;
    double dn;
    double d2n;
};

NozzleValue nozzle_eval(const Nozzle& nozzle, double t);

}  // namespace transonic
