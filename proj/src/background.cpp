#include "transonic/background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "transonic/errors.hpp"

namespace transonic {

namespace {

struct FluxFunction {
    const GasModel& gas;
    double n;
    double flux;

    double operator()(double u) const
    {
        return bernoulli_state(gas, u * u).rho * u * n - flux;
    }
    // d(rho u)/du = rho (1 - u^2/c^2)
    double slope(double u) const
    {
        const BernoulliState s = bernoulli_state(gas, u * u);
        return n * s.rho * (1.0 - u * u / s.c_sq);
    }
};

double solve_branch(const FluxFunction& f, double lo, double hi, double guess)
{
    double u = guess;
    for (int it = 0; it < 100; ++it) {
        const double r = f(u);
        const double d = f.slope(u);
        if (d == 0.0)
            break;
        const double next = u - r / d;
        if (!(next > lo && next < hi))
            break;
        if (std::abs(next - u) <= 1e-15 * std::abs(u)) {
            u = next;
            if (std::abs(f(u)) <= 1e-12 * f.flux)
                return u;
            break;
        }
        u = next;
        if (std::abs(r) <= 1e-14 * f.flux && it > 1)
            return u;
    }
    // Flux is unimodal with its maximum at u = c*, so [lo, hi] brackets one root.
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo * fhi > 0.0)
        throw BranchSolveError("no root of the mass-flux relation on [" + std::to_string(lo) + ", "
                               + std::to_string(hi) + "]");
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0.0) == (flo < 0.0)) {
            a = m;
            flo = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double BackgroundFlow::mach(int i) const
{
    return std::sqrt(tau[i]);
}

BackgroundFlow solve_background(const GasModel& gas, const Nozzle& nozzle, const Grid1D& grid)
{
    gas.validate();
    nozzle.validate();
    BackgroundFlow bg;
    bg.gas = gas;
    bg.nozzle = nozzle;
    bg.grid = grid.physical();

    const double c_star_sq = gas.critical_speed_sq();
    const double c_star = std::sqrt(c_star_sq);
    const double rho_star = gas.critical_density();
    const double n_throat = nozzle_eval(nozzle, 0.0).n;
    bg.mass_flux = rho_star * c_star * n_throat;
    const double u_max = std::sqrt(gas.cavitation_speed_sq());

    const int count = bg.grid.size();
    const int throat = bg.grid.throat_index();
    auto resize = [count](std::vector<double>& v) { v.assign(count, 0.0); };
    for (auto* v : {&bg.x1, &bg.n, &bg.dn, &bg.u_b, &bg.rho_b, &bg.c_b_sq, &bg.tau, &bg.phi_b,
                    &bg.k_b, &bg.alpha, &bg.d1k_b, &bg.d11_phi_b})
        resize(*v);

    const double gm = gas.gamma;
    for (int i = 0; i < count; ++i) {
        const double x = bg.grid.node(i);
        const NozzleValue nz = nozzle_eval(nozzle, x);
        double u;
        if (i == throat) {
            u = c_star;
        } else {
            const FluxFunction f{gas, nz.n, bg.mass_flux};
            if (x < 0.0)
                u = solve_branch(f, 1e-6, c_star, 0.5 * c_star);
            else
                u = solve_branch(f, c_star, u_max - 1e-6, 1.5 * c_star);
        }
        const BernoulliState s = bernoulli_state(gas, u * u);
        const double tau = (i == throat) ? 1.0 : u * u / s.c_sq;

        bg.x1[i] = x;
        bg.n[i] = nz.n;
        bg.dn[i] = nz.dn;
        bg.u_b[i] = u;
        bg.rho_b[i] = s.rho;
        bg.c_b_sq[i] = (i == throat) ? c_star_sq : s.c_sq;
        bg.tau[i] = tau;
        bg.k_b[i] = nz.n * nz.n * (1.0 - tau);

        // n'/(tau - 1), with its throat limit sqrt(n n''/(gamma+1)).
        const double ratio = (i == throat) ? std::sqrt(nz.n * nz.d2n / (gm + 1.0)) : nz.dn / (tau - 1.0);
        bg.alpha[i] = nz.n * ratio * (1.0 + tau + (gm - 1.0) * tau * tau);
        bg.d1k_b[i] = -nz.n * ratio * ((gm + 1.0) * tau * tau - 2.0 * tau + 2.0);
        bg.d11_phi_b[i] = u * ratio / nz.n;
    }

    const double dx = bg.grid.dx();
    for (int i = 1; i < count; ++i)
        bg.phi_b[i] = bg.phi_b[i - 1] + 0.5 * dx * (bg.u_b[i - 1] + bg.u_b[i]);

    const double tau_limit = 4.0 / (3.0 - gm);
    const double tau_max = *std::max_element(bg.tau.begin(), bg.tau.end());
    if (gm < 3.0 && tau_max >= tau_limit) {
        std::ostringstream os;
        os << "exit Mach^2 " << tau_max << " reaches 4/(3-gamma) = " << tau_limit;
        throw AdmissibilityError(os.str());
    }
    return bg;
}

IdentityReport background_identities(const BackgroundFlow& bg)
{
    IdentityReport r;
    const int count = bg.size();
    const double dx = bg.grid.dx();
    for (int i = 1; i + 1 < count; ++i) {
        const double fd = (bg.k_b[i + 1] - bg.k_b[i - 1]) / (2.0 * dx);
        r.fd_mismatch = std::max(r.fd_mismatch, std::abs(fd - bg.d1k_b[i]));
    }
    r.delta1 = std::numeric_limits<double>::infinity();
    r.delta2 = std::numeric_limits<double>::infinity();
    r.min_alpha = std::numeric_limits<double>::infinity();
    r.max_d1k_b = -std::numeric_limits<double>::infinity();
    const int throat = bg.grid.throat_index();
    std::ostringstream bad;
    for (int i = 0; i < count; ++i) {
        for (int l = 0; l <= 6; ++l)
            r.delta1 = std::min(r.delta1, 2.0 * bg.alpha[i] - l * bg.d1k_b[i]);
        r.delta2 = std::min(r.delta2, 2.0 * bg.alpha[i] + bg.d1k_b[i]);
        r.min_alpha = std::min(r.min_alpha, bg.alpha[i]);
        r.max_d1k_b = std::max(r.max_d1k_b, bg.d1k_b[i]);

        const bool type_ok = (i < throat && bg.tau[i] < 1.0) || (i == throat && bg.tau[i] == 1.0)
                             || (i > throat && bg.tau[i] > 1.0);
        if (!type_ok || !(bg.u_b[i] > 0.0) || !(bg.d11_phi_b[i] > 0.0) || !(bg.alpha[i] > 0.0)
            || !(bg.d1k_b[i] < 0.0)) {
            if (bad.tellp() == 0)
                bad << "sign condition fails at x1=" << bg.x1[i] << " (tau=" << bg.tau[i]
                    << ", alpha=" << bg.alpha[i] << ", d1k_b=" << bg.d1k_b[i] << ")";
        }
    }
    if (bad.tellp() == 0 && !(r.delta1 > 0.0 && r.delta2 > 0.0))
        bad << "identity margins not positive: delta1=" << r.delta1 << ", delta2=" << r.delta2;
    if (bad.tellp() != 0)
        throw IdentityViolation(bad.str());
    return r;
}

std::vector<double> mass_flux_residuals(const BackgroundFlow& bg)
{
    std::vector<double> r(bg.size());
    for (int i = 0; i < bg.size(); ++i)
        r[i] = std::abs(bg.rho_b[i] * bg.u_b[i] * bg.n[i] - bg.mass_flux) / bg.mass_flux;
    return r;
}

std::vector<double> background_equation_residual(const BackgroundFlow& bg)
{
    std::vector<double> r(bg.size(), 0.0);
    const double dx = bg.grid.dx();
    for (int i = 1; i + 1 < bg.size(); ++i) {
        const double du = (bg.u_b[i + 1] - bg.u_b[i - 1]) / (2.0 * dx);
        r[i] = bg.n[i] * (bg.c_b_sq[i] - bg.u_b[i] * bg.u_b[i]) * du + bg.dn[i] * bg.c_b_sq[i] * bg.u_b[i];
    }
    return r;
}

}  // namespace transonic
