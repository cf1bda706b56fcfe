#pragma once

#include <span>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/coefficients.hpp"
#include "transonic/field.hpp"
#include "transonic/linear_solver.hpp"
#include "transonic/report.hpp"

namespace transonic {

struct SolverConfig {
    int n1 = 257;
    int n2 = 32;
    std::vector<double> eps_schedule = default_eps_schedule();
    double linear_tol = 1e-10;
    double mu = 0.05;
    double l_ext = 1.0;
    double delta_floor = 1e-6;
    double delta_ext = 0.1;
    double tol = 1e-8;
    int max_iter = 50;
    double relax = 1.0;
    double eps0 = 2e-2;
    double kappa0 = 0.2;  // radius of the iteration ball in H^4
};

struct TransonicProblem {
    GasModel gas;
    Nozzle nozzle;
    CircleSeries g;
    SolverConfig config;

    Grid1D grid() const { return Grid1D::make(config.n1); }
    double epsilon_measured() const { return circle_norm(g, 5); }
    // Throws AdmissibilityError when ||g||_5 > eps0.
    void validate() const;
};

struct IterationState {
    Field2D phi_hat;
    double kappa_measured = 0.0;
    std::vector<double> step_norms;
    std::vector<double> contraction_ratios;
    std::vector<double> kappa_history;
    int iterations = 0;
    ConditionReport conditions;
    ContinuationResult linear;
    double mu_used = 0.0;
    int extension_attempts = 0;
};

// x1-constant field equal to g.
Field2D lift_boundary(const CircleSeries& g, const Grid1D& grid, int n2);

IterationState initial_state(const TransonicProblem& problem);

// Throws ConditionError, KappaExceeded and anything from the linear solve.
IterationState picard_step(const IterationState& state, const TransonicProblem& problem,
                           const BackgroundFlow& bg);

struct TransonicSolution {
    Field2D phi_hat;
    Field2D phi;
    Field2D mach;
    std::vector<double> sonic_line;  // x1 of Mach 1 per x2 node
    double bernoulli_residual = 0.0;
    double mass_residual = 0.0;
    double equation_residual = 0.0;
    double stability_ratio = 0.0;  // NaN when g = 0
    IterationState state;
};

// Throws NoConvergence and upstream errors.
std::pair<TransonicSolution, SolveReport> solve_transonic(const TransonicProblem& problem);

struct DiagnosticsTable {
    double mass_residual = 0.0;
    double mass_residual_perturbation = 0.0;  // part not present for phi_hat = 0
    double bernoulli_residual = 0.0;
    double equation_residual = 0.0;
    std::vector<double> entry_tangential_velocity;
    std::vector<double> sonic_line;
    std::vector<int> k_sign_changes;  // per x2 row
    double sonic_displacement = 0.0;  // max |x1| of the sonic line
};

// d1(rho n d1 phi) + d2(rho d2 phi / n) for phi = phi_b + phi_hat, with x1
// fluxes at half nodes; zero on the two boundary rows.
Field2D mass_residual_field(const BackgroundFlow& bg, const Field2D& phi_hat);

DiagnosticsTable diagnostics(const TransonicSolution& sol, const BackgroundFlow& bg,
                             double denominator_floor = 1e-6);

// Spectral amplitude |2 c_m| of phi_hat maximized over x1.
double mode_amplitude(const Field2D& f, int m);

struct SweepRow {
    double eps = 0.0;
    double g_norm5 = 0.0;
    double phi_norm4 = 0.0;
    double stability_ratio = 0.0;
    double max_contraction = 0.0;
    int iterations = 0;
    double sonic_displacement = 0.0;
    double mode_amplitude = 0.0;
    double other_amplitude = 0.0;
};

// g = eps cos(mode x2) for each eps; independent solves run on up to workers threads.
std::vector<SweepRow> sweep(const TransonicProblem& base, std::span<const double> eps_list, int mode = 1,
                            int workers = 1);

}  // namespace transonic
