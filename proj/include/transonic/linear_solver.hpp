#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "transonic/coefficients.hpp"
#include "transonic/field.hpp"

namespace transonic {

// Unknowns are node-major over a ghost layer at x1 = -1 - dx followed by the
// extended grid: index (i + 1) * n2 + j for i = -1 .. size-1.
struct LinearSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    Grid1D grid;
    int n2 = 0;
    double eps = 0.0;
    int entry_rows = 0;
    int exit_rows = 0;

    static int unknown(int i, int j, int n2) { return (i + 1) * n2 + j; }
    int unknowns() const { return static_cast<int>(rhs.size()); }
};

// Interior rows: k d11 + b d12 + a d22 - alpha_h d1 + eps d111 with the
// fields of cs. In rows where k <= 0 the d11 stencil is upwind (backward,
// second order); first x1 derivatives are central everywhere, and d111 is
// central (biased at the last interior node). Boundary rows: u = 0 and
// d1 u = 0 at x1 = -1, d1 u = 0 at the extended exit.
LinearSystem assemble(const CoefficientSet& cs, double eps);

// Throws SingularSystemError when the relative residual stays above tol.
Field2D solve_linear(const LinearSystem& system, double tol = 1e-10);

double relative_residual(const LinearSystem& system, const Field2D& u);

// Interior-row operator applied to a field on the extended grid (ghost layer
// mirrored so that d1 u(-1) = 0). Boundary rows are returned as 0.
Field2D apply_operator(const CoefficientSet& cs, const Field2D& u, double eps);

struct EnergyReport {
    double lhs = 0.0;       // eps ||d11 u||_0^2 + ||u||_1^2
    double rhs_norm = 0.0;  // ||f||_0^2
    double ratio = 0.0;
    double residual_norm = 0.0;
};

EnergyReport energy_report(const CoefficientSet& cs, const Field2D& u, double eps, double residual);

struct ContinuationResult {
    Field2D solution;           // restricted to [-1, 1]
    Field2D extended_solution;  // on the extended grid
    EnergyReport energy;        // at the last eps
    std::vector<EnergyReport> energy_history;
    std::vector<double> eps_values;
    std::vector<double> eps_differences;  // ||u_j - u_{j+1}||_1 on the extended grid
    double entry_value_max = 0.0;
    double exit_derivative_max = 0.0;
    std::vector<std::string> warnings;
};

// Throws ContinuationDivergence when the last eps-difference grows.
ContinuationResult solve_with_continuation(const CoefficientSet& cs, std::span<const double> schedule,
                                           double tol = 1e-10);

std::vector<double> default_eps_schedule();

}  // namespace transonic
