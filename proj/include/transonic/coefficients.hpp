#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/field.hpp"

namespace transonic {

// Gradient of the perturbation potential on the physical grid.
struct GradientField {
    Field2D d1;
    Field2D d2;

    static GradientField zero(const Grid1D& grid, int n2);
    static GradientField of(const Field2D& phi_hat);
};

struct PointwiseCoefficients {
    Field2D k;
    Field2D b;
};

// denominator_floor is relative to c*^2.
// Throws CavitationError, TangentialSonicError.
PointwiseCoefficients pointwise_coefficients(const BackgroundFlow& bg, const GradientField& grad,
                                             double denominator_floor = 1e-6);
Field2D rhs_f(const BackgroundFlow& bg, const GradientField& grad, double denominator_floor = 1e-6);

// Frozen coefficients of h*(k d11 + b d12 + d22 - alpha d1) on the extended grid.
struct CoefficientSet {
    Field2D k_field;
    Field2D b_field;
    Field2D a_field;
    Field2D alpha_h_field;
    Field2D rhs_field;
    double mu = 0.0;
    double k_plus = 0.0;
    double alpha_plus = 0.0;
    double delta_star = 0.0;
    double nu_star = 0.0;

    const Grid1D& grid() const { return k_field.grid(); }
    int n2() const { return k_field.n2(); }
};

struct ConditionReport {
    double min_a = 0.0;
    double min_neg_d1a = 0.0;
    std::array<double, 5> p_margin{};  // 2 h alpha - (2p-1) d1(hk), p = 0..4
    std::array<double, 6> l_margin{};  // 2 h alpha - l d1(hk), l = 0..5
    double k_entry_min = 0.0;
    double k_exit_min = 0.0;
    double delta_star = 0.0;
    double b_norm3 = 0.0;
    double nu_star = 0.0;
    double d2a_norm = 0.0;
    bool pass = false;
    std::string failure;

    std::vector<std::pair<std::string, double>> rows() const;
};

ConditionReport verify_conditions(const CoefficientSet& cs);

struct ExtensionOptions {
    double mu = 0.05;
    double l_ext = 1.0;
    double delta_ext = 0.1;
    int max_mu_halvings = 6;
    int max_mu_doublings = 4;
    bool allow_l_ext_doubling = true;
};

// One extension at fixed mu and l_ext, no checking.
CoefficientSet extend_coefficients(const Field2D& k_m, const Field2D& b_m, const Field2D& f_m,
                                   const BackgroundFlow& bg, double mu, double l_ext,
                                   double delta_ext = 0.1);

struct ExtendedCoefficients {
    CoefficientSet set;
    ConditionReport report;
    int attempts = 0;
};

// Adjusts mu (halving on failed margins, doubling when only ||b||_3 <= nu*
// fails), then doubles l_ext once, until verify_conditions passes.
// Throws ConditionError.
ExtendedCoefficients build_multiplier_and_extend(const Field2D& k_m, const Field2D& b_m,
                                                 const Field2D& f_m, const BackgroundFlow& bg,
                                                 const ExtensionOptions& options = {});

}  // namespace transonic
