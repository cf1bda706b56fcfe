#pragma once

#include <vector>

#include "transonic/gas.hpp"
#include "transonic/grid.hpp"

namespace transonic {

// Choked quasi-1D flow sampled on the physical nodes of a grid.
struct BackgroundFlow {
    GasModel gas;
    Nozzle nozzle;
    Grid1D grid;  // physical part only
    double mass_flux = 0.0;  // rho* c* n(0)

    std::vector<double> x1, n, dn, u_b, rho_b, c_b_sq, tau, phi_b, k_b, alpha, d1k_b, d11_phi_b;

    int size() const { return static_cast<int>(x1.size()); }
    double mach(int i) const;
};

// Throws BranchSolveError, AdmissibilityError.
BackgroundFlow solve_background(const GasModel& gas, const Nozzle& nozzle, const Grid1D& grid);

struct IdentityReport {
    double fd_mismatch = 0.0;   // max interior |central FD of k_b - closed form|
    double delta1 = 0.0;        // min over nodes and l = 0..6 of 2 alpha - l d1k_b
    double delta2 = 0.0;        // min of 2 alpha + d1k_b
    double min_alpha = 0.0;
    double max_d1k_b = 0.0;
};

// Throws IdentityViolation if a sign condition fails at some node.
IdentityReport background_identities(const BackgroundFlow& bg);

// |rho u n - flux| / flux per node.
std::vector<double> mass_flux_residuals(const BackgroundFlow& bg);

// n (c^2 - u^2) u' + n' c^2 u with u' by central differences; 0 at the end nodes.
std::vector<double> background_equation_residual(const BackgroundFlow& bg);

}  // namespace transonic
