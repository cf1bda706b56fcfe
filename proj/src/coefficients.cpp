#include "transonic/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "transonic/errors.hpp"

namespace transonic {

namespace {

void check_grid(const BackgroundFlow& bg, const GradientField& grad)
{
    if (grad.d1.n1() != bg.size() || grad.d2.n1() != bg.size() || grad.d1.n2() != grad.d2.n2())
        throw std::invalid_argument("gradient grid does not match the background");
}

struct LocalState {
    double u;      // d1 phi
    double c_sq;
    double denom;  // c^2 - (d2 phi)^2 / n^2
};

LocalState local_state(const BackgroundFlow& bg, int i, double p1, double p2, double floor)
{
    const double n = bg.n[i];
    const double u = bg.u_b[i] + p1;
    const double q_sq = u * u + p2 * p2 / (n * n);
    const double c_sq = bernoulli_state(bg.gas, q_sq).c_sq;
    const double denom = c_sq - p2 * p2 / (n * n);
    if (denom < floor * bg.gas.critical_speed_sq()) {
        std::ostringstream os;
        os << "tangential speed reaches the sound speed at x1=" << bg.x1[i]
           << " (denominator " << denom << ")";
        throw TangentialSonicError(os.str());
    }
    return {u, c_sq, denom};
}

// 10 s^3 - 15 s^4 + 6 s^5 on [0, 1], clamped outside.
double smootherstep(double s)
{
    if (s <= 0.0)
        return 0.0;
    if (s >= 1.0)
        return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double taper(double s, double width)
{
    if (s >= width)
        return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * s / width));
}

double backward_slope(double f0, double f1, double f2, double dx)
{
    return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * dx);
}

constexpr double kAlphaRamp = 0.25;
constexpr double kTaperWidth = 0.25;

}  // namespace

GradientField GradientField::zero(const Grid1D& grid, int n2)
{
    return {Field2D(grid, n2), Field2D(grid, n2)};
}

GradientField GradientField::of(const Field2D& phi_hat)
{
    return {derivative(phi_hat, 1, 0), derivative(phi_hat, 0, 1)};
}

PointwiseCoefficients pointwise_coefficients(const BackgroundFlow& bg, const GradientField& grad,
                                             double denominator_floor)
{
    check_grid(bg, grad);
    PointwiseCoefficients out{Field2D(grad.d1.grid(), grad.d1.n2()), Field2D(grad.d1.grid(), grad.d1.n2())};
    for (int i = 0; i < bg.size(); ++i) {
        const double n = bg.n[i];
        for (int j = 0; j < grad.d1.n2(); ++j) {
            const double p1 = grad.d1(i, j), p2 = grad.d2(i, j);
            if (p1 == 0.0 && p2 == 0.0) {
                out.k(i, j) = bg.k_b[i];
                continue;
            }
            const LocalState s = local_state(bg, i, p1, p2, denominator_floor);
            out.k(i, j) = n * n * (s.c_sq - s.u * s.u) / s.denom;
            out.b(i, j) = -2.0 * s.u * p2 / s.denom;
        }
    }
    return out;
}

Field2D rhs_f(const BackgroundFlow& bg, const GradientField& grad, double denominator_floor)
{
    check_grid(bg, grad);
    const double gm = bg.gas.gamma;
    Field2D f(grad.d1.grid(), grad.d1.n2());
    for (int i = 0; i < bg.size(); ++i) {
        const double n = bg.n[i], dn = bg.dn[i], ub = bg.u_b[i], cb_sq = bg.c_b_sq[i];
        const double d11 = bg.d11_phi_b[i];
        const double ub_sq = ub * ub;
        const double poly = cb_sq * cb_sq + cb_sq * ub_sq + (gm - 1.0) * ub_sq * ub_sq;
        for (int j = 0; j < grad.d1.n2(); ++j) {
            const double p1 = grad.d1(i, j), p2 = grad.d2(i, j);
            if (p1 == 0.0 && p2 == 0.0)
                continue;
            const LocalState s = local_state(bg, i, p1, p2, denominator_floor);
            const double p2n_sq = p2 * p2 / (n * n);
            const double brace = 0.5 * (gm - 1.0) * (d11 + dn / n * ub) * (p1 * p1 + p2n_sq)
                                 + d11 * p1 * p1
                                 - dn / n * (s.c_sq - cb_sq) * p1
                                 - dn / (n * n * n) * s.u * p2 * p2;
            const double bracket = n * n * d11 / (cb_sq * ub) * poly / s.denom - bg.alpha[i];
            f(i, j) = brace * n * n / s.denom + bracket * p1;
        }
    }
    return f;
}

CoefficientSet extend_coefficients(const Field2D& k_m, const Field2D& b_m, const Field2D& f_m,
                                   const BackgroundFlow& bg, double mu, double l_ext, double delta_ext)
{
    if (k_m.n1() != bg.size() || b_m.n1() != bg.size() || f_m.n1() != bg.size())
        throw std::invalid_argument("coefficient fields must live on the physical grid");
    if (!(mu >= 0.0) || !(l_ext > 0.0))
        throw std::invalid_argument("mu must be nonnegative and l_ext positive");
    const Grid1D grid = bg.grid.with_extension(l_ext);
    const int n2 = k_m.n2();
    const int ie = grid.exit_index();
    const int total = grid.size();
    const double dx = grid.dx();
    const double length = grid.l_ext();
    if (grid.n_ext() < 4)
        throw std::invalid_argument("extension shorter than four grid cells");

    Field2D k = k_m.padded_to(grid), b = b_m.padded_to(grid), f = f_m.padded_to(grid);
    std::vector<double> alpha(total, 0.0);
    std::copy(bg.alpha.begin(), bg.alpha.end(), alpha.begin());

    double k_exit_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n2; ++j)
        k_exit_min = std::min(k_exit_min, k_m(ie, j));
    const double k_plus = std::max(delta_ext, -2.0 * k_exit_min);

    for (int j = 0; j < n2; ++j) {
        const double k1 = k_m(ie, j), b1 = b_m(ie, j), f1 = f_m(ie, j);
        const double dk = backward_slope(k1, k_m(ie - 1, j), k_m(ie - 2, j), dx);
        const double db = backward_slope(b1, b_m(ie - 1, j), b_m(ie - 2, j), dx);
        const double d2b = (2.0 * b1 - 5.0 * b_m(ie - 1, j) + 4.0 * b_m(ie - 2, j) - b_m(ie - 3, j)) / (dx * dx);
        const double df = backward_slope(f1, f_m(ie - 1, j), f_m(ie - 2, j), dx);
        for (int i = ie + 1; i < total; ++i) {
            const double t = grid.node(i) - 1.0;
            const double s = t / length;
            const double blend = smootherstep(s);
            k(i, j) = (k1 + dk * t) * (1.0 - blend) + k_plus * blend;
            b(i, j) = b1 + t * (db + 0.5 * d2b * t);
            f(i, j) = (f1 + df * t) * taper(s, kTaperWidth);
        }
    }

    // The exit rise of k must be dominated by alpha in 2 alpha - 7 d1(hk) > 0.
    const Field2D dk_ext = derivative(k, 1, 0);
    double rise = 0.0;
    for (int i = ie; i < total; ++i)
        for (int j = 0; j < n2; ++j)
            rise = std::max(rise, dk_ext(i, j) - mu * k(i, j));
    const double alpha_plus = std::max(alpha[ie], 7.0 * rise);
    const double a1 = bg.alpha[ie];
    const double da = backward_slope(a1, bg.alpha[ie - 1], bg.alpha[ie - 2], dx);
    for (int i = ie + 1; i < total; ++i) {
        const double t = grid.node(i) - 1.0;
        const double blend = smootherstep(t / length / kAlphaRamp);
        alpha[i] = (a1 + da * t) * (1.0 - blend) + alpha_plus * blend;
    }

    CoefficientSet cs;
    cs.mu = mu;
    cs.k_plus = k_plus;
    cs.alpha_plus = alpha_plus;
    cs.k_field = Field2D(grid, n2);
    cs.b_field = Field2D(grid, n2);
    cs.a_field = Field2D(grid, n2);
    cs.alpha_h_field = Field2D(grid, n2);
    cs.rhs_field = Field2D(grid, n2);
    for (int i = 0; i < total; ++i) {
        const double h = std::exp(-mu * grid.node(i));
        for (int j = 0; j < n2; ++j) {
            cs.k_field(i, j) = h * k(i, j);
            cs.b_field(i, j) = h * b(i, j);
            cs.a_field(i, j) = h;
            cs.alpha_h_field(i, j) = h * alpha[i];
            cs.rhs_field(i, j) = h * f(i, j);
        }
    }
    return cs;
}

std::vector<std::pair<std::string, double>> ConditionReport::rows() const
{
    std::vector<std::pair<std::string, double>> r;
    r.emplace_back("min_a", min_a);
    r.emplace_back("min_neg_d1a", min_neg_d1a);
    for (int p = 0; p < 5; ++p)
        r.emplace_back("p_margin_" + std::to_string(p), p_margin[p]);
    for (int l = 0; l < 6; ++l)
        r.emplace_back("l_margin_" + std::to_string(l), l_margin[l]);
    r.emplace_back("k_entry_min", k_entry_min);
    r.emplace_back("k_exit_min", k_exit_min);
    r.emplace_back("delta_star", delta_star);
    r.emplace_back("b_norm3", b_norm3);
    r.emplace_back("nu_star", nu_star);
    r.emplace_back("d2a_norm3", d2a_norm);
    r.emplace_back("pass", pass ? 1.0 : 0.0);
    return r;
}

ConditionReport verify_conditions(const CoefficientSet& cs)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    ConditionReport r;
    const int total = cs.grid().size();
    const int n2 = cs.n2();
    const Field2D d1hk = derivative(cs.k_field, 1, 0);
    const Field2D d1a = derivative(cs.a_field, 1, 0);

    r.min_a = r.min_neg_d1a = r.k_entry_min = r.k_exit_min = inf;
    r.p_margin.fill(inf);
    r.l_margin.fill(inf);
    for (int i = 0; i < total; ++i)
        for (int j = 0; j < n2; ++j) {
            r.min_a = std::min(r.min_a, cs.a_field(i, j));
            r.min_neg_d1a = std::min(r.min_neg_d1a, -d1a(i, j));
            const double two_ha = 2.0 * cs.alpha_h_field(i, j);
            for (int p = 0; p < 5; ++p)
                r.p_margin[p] = std::min(r.p_margin[p], two_ha - (2 * p - 1) * d1hk(i, j));
            for (int l = 0; l < 6; ++l)
                r.l_margin[l] = std::min(r.l_margin[l], two_ha - l * d1hk(i, j));
        }
    for (int j = 0; j < n2; ++j) {
        r.k_entry_min = std::min(r.k_entry_min, cs.k_field(0, j));
        r.k_exit_min = std::min(r.k_exit_min, cs.k_field(total - 1, j));
    }
    r.delta_star = std::min({r.min_a, r.min_neg_d1a, *std::min_element(r.p_margin.begin(), r.p_margin.end()),
                             *std::min_element(r.l_margin.begin(), r.l_margin.end())});
    r.nu_star = 0.25 * r.delta_star;
    r.b_norm3 = sobolev_norm(cs.b_field, 3);
    r.d2a_norm = sobolev_norm(derivative(cs.a_field, 0, 1), 3);

    std::ostringstream why;
    auto need = [&why](bool ok, const std::string& name, double value) {
        if (!ok && why.tellp() == 0)
            why << name << " = " << value;
    };
    need(r.min_a > 0.0, "min a", r.min_a);
    need(r.min_neg_d1a > 0.0, "min -d1 a", r.min_neg_d1a);
    for (int p = 0; p < 5; ++p)
        need(r.p_margin[p] > 0.0, "2h alpha - (2p-1) d1(hk), p=" + std::to_string(p), r.p_margin[p]);
    for (int l = 0; l < 6; ++l)
        need(r.l_margin[l] > 0.0, "2h alpha - l d1(hk), l=" + std::to_string(l), r.l_margin[l]);
    need(r.k_entry_min > 0.0, "min k on the entry slice", r.k_entry_min);
    need(r.k_exit_min > 0.0, "min k on the extended exit slice", r.k_exit_min);
    need(r.b_norm3 <= r.nu_star, "||b||_3 exceeds nu* " + std::to_string(r.nu_star) + ":", r.b_norm3);
    need(r.d2a_norm <= r.nu_star, "||d2 a||_3", r.d2a_norm);
    r.failure = why.str();
    r.pass = r.failure.empty();
    return r;
}

ExtendedCoefficients build_multiplier_and_extend(const Field2D& k_m, const Field2D& b_m,
                                                 const Field2D& f_m, const BackgroundFlow& bg,
                                                 const ExtensionOptions& options)
{
    ExtendedCoefficients out;
    std::vector<double> lengths{options.l_ext};
    if (options.allow_l_ext_doubling)
        lengths.push_back(2.0 * options.l_ext);
    std::ostringstream history;
    for (double l_ext : lengths) {
        // Failing margins call for a smaller mu. When only the smallness of b
        // fails, nu* = delta*/4 is limited by -d1 h = mu h and mu goes up instead.
        double mu = options.mu;
        int direction = 0;
        for (int step = 0;; ++step) {
            CoefficientSet cs = extend_coefficients(k_m, b_m, f_m, bg, mu, l_ext, options.delta_ext);
            ConditionReport rep = verify_conditions(cs);
            ++out.attempts;
            if (rep.pass) {
                cs.delta_star = rep.delta_star;
                cs.nu_star = rep.nu_star;
                out.set = std::move(cs);
                out.report = std::move(rep);
                return out;
            }
            history << "\n  mu=" << mu << " l_ext=" << l_ext << ": " << rep.failure;
            const bool only_b = rep.delta_star > 0.0 && rep.k_entry_min > 0.0 && rep.k_exit_min > 0.0;
            if (direction == 0)
                direction = only_b ? +1 : -1;
            if (direction > 0 && (!only_b || step >= options.max_mu_doublings))
                break;
            if (direction < 0 && step >= options.max_mu_halvings)
                break;
            mu = direction > 0 ? 2.0 * mu : 0.5 * mu;
        }
    }
    throw ConditionError("no admissible multiplier/extension found:" + history.str());
}

}  // namespace transonic
