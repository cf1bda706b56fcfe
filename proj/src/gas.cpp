#include "transonic/gas.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "transonic/errors.hpp"

namespace transonic {

GasModel GasModel::with_unit_sonic_density(double gamma, double kappa)
{
    // rho* = 1 means c*^2 = kappa*gamma.
    const double c_star_sq = kappa * gamma;
    return GasModel{gamma, kappa, c_star_sq * (gamma + 1.0) / (2.0 * (gamma - 1.0))};
}

double GasModel::critical_density() const
{
    return std::pow(critical_speed_sq() / (kappa * gamma), 1.0 / (gamma - 1.0));
}

void GasModel::validate() const
{
    if (!(gamma > 1.0))
        throw std::invalid_argument("gamma must exceed 1");
    if (!(kappa > 0.0))
        throw std::invalid_argument("kappa must be positive");
    if (!(c0 > 0.0))
        throw std::invalid_argument("c0 must be positive");
}

BernoulliState bernoulli_state(const GasModel& gas, double q_sq)
{
    if (!(q_sq < gas.cavitation_speed_sq()))
        throw CavitationError("speed^2 " + std::to_string(q_sq) + " reaches the cavitation limit "
                              + std::to_string(gas.cavitation_speed_sq()));
    if (q_sq < 0.0)
        throw std::invalid_argument("negative speed^2");
    const double c_sq = (gas.gamma - 1.0) * (gas.c0 - 0.5 * q_sq);
    const double rho = std::pow(c_sq / (gas.kappa * gas.gamma), 1.0 / (gas.gamma - 1.0));
    return {rho, c_sq};
}

double bernoulli_energy(const GasModel& gas, double q_sq, double rho)
{
    return 0.5 * q_sq + gas.kappa * gas.gamma / (gas.gamma - 1.0) * std::pow(rho, gas.gamma - 1.0);
}

void Nozzle::validate() const
{
    if (!(n0 > 0.0))
        throw std::invalid_argument("nozzle n0 must be positive");
    if (!(a_quad > 0.0))
        throw std::invalid_argument("nozzle a_quad must be positive");
}

NozzleValue nozzle_eval(const Nozzle& nozzle, double t)
{
    return {nozzle.n0 + nozzle.a_quad * t * t, 2.0 * nozzle.a_quad * t, 2.0 * nozzle.a_quad};
}

}  // namespace transonic
