#include "transonic/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>

#include "transonic/errors.hpp"
#include "transonic/spectral.hpp"

namespace transonic {

void TransonicProblem::validate() const
{
    gas.validate();
    nozzle.validate();
    const double e = epsilon_measured();
    if (e > config.eps0) {
        std::ostringstream os;
        os << "||g||_5 = " << e << " exceeds eps0 = " << config.eps0;
        throw AdmissibilityError(os.str());
    }
    if (!(config.relax > 0.0 && config.relax <= 1.0))
        throw std::invalid_argument("relax must lie in (0, 1]");
}

Field2D lift_boundary(const CircleSeries& g, const Grid1D& grid, int n2)
{
    Field2D out(grid, n2);
    const std::vector<double> trace = g.sample(n2);
    for (int i = 0; i < out.n1(); ++i)
        std::copy(trace.begin(), trace.end(), out.row(i).begin());
    return out;
}

IterationState initial_state(const TransonicProblem& problem)
{
    IterationState s;
    s.phi_hat = lift_boundary(problem.g, problem.grid(), problem.config.n2);
    s.kappa_measured = sobolev_norm(s.phi_hat, 4);
    s.kappa_history.push_back(s.kappa_measured);
    return s;
}

IterationState picard_step(const IterationState& state, const TransonicProblem& problem,
                           const BackgroundFlow& bg)
{
    const SolverConfig& cfg = problem.config;
    const GradientField grad = GradientField::of(state.phi_hat);
    const PointwiseCoefficients pc = pointwise_coefficients(bg, grad, cfg.delta_floor);
    const Field2D f = rhs_f(bg, grad, cfg.delta_floor);

    ExtensionOptions opts;
    opts.mu = cfg.mu;
    opts.l_ext = cfg.l_ext;
    opts.delta_ext = cfg.delta_ext;
    ExtendedCoefficients ext = build_multiplier_and_extend(pc.k, pc.b, f, bg, opts);

    // phi_hat = phi_bar + lift, so phi_bar solves hM(phi_bar) = h f - hM(lift).
    CoefficientSet& cs = ext.set;
    const Field2D lift_ext = lift_boundary(problem.g, cs.grid(), cfg.n2);
    if (!problem.g.is_zero())
        cs.rhs_field -= apply_operator(cs, lift_ext, 0.0);

    IterationState next;
    next.linear = solve_with_continuation(cs, cfg.eps_schedule, cfg.linear_tol);
    Field2D raw = next.linear.solution + lift_boundary(problem.g, bg.grid, cfg.n2);
    if (cfg.relax < 1.0)
        raw = state.phi_hat + cfg.relax * (raw - state.phi_hat);

    next.phi_hat = std::move(raw);
    next.conditions = ext.report;
    next.mu_used = cs.mu;
    next.extension_attempts = ext.attempts;
    next.iterations = state.iterations + 1;
    next.step_norms = state.step_norms;
    next.contraction_ratios = state.contraction_ratios;
    next.kappa_history = state.kappa_history;

    const double step = sobolev_norm(next.phi_hat - state.phi_hat, 3);
    const double noise = 10.0 * cfg.linear_tol * std::max(sobolev_norm(next.phi_hat, 3), 1e-300);
    if (!next.step_norms.empty() && next.step_norms.back() > noise)
        next.contraction_ratios.push_back(step / next.step_norms.back());
    next.step_norms.push_back(step);

    next.kappa_measured = sobolev_norm(next.phi_hat, 4);
    next.kappa_history.push_back(next.kappa_measured);
    if (next.kappa_measured > cfg.kappa0) {
        std::ostringstream os;
        os << "||phi_hat||_4 = " << next.kappa_measured << " left the iteration ball of radius "
           << cfg.kappa0;
        throw KappaExceeded(os.str());
    }
    return next;
}

namespace {

struct FlowState {
    double q_sq;
    double c_sq;
    double rho;
};

FlowState flow_state(const BackgroundFlow& bg, int i, double p1, double p2)
{
    const double u = bg.u_b[i] + p1;
    const double q_sq = u * u + p2 * p2 / (bg.n[i] * bg.n[i]);
    const BernoulliState s = bernoulli_state(bg.gas, q_sq);
    return {q_sq, s.c_sq, s.rho};
}

double sonic_crossing(const std::vector<double>& x, const std::vector<double>& s)
{
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == 0.0)
            return x[i];
        if ((s[i] > 0.0) != (s[i + 1] > 0.0) && s[i + 1] != 0.0)
            return x[i] + (x[i + 1] - x[i]) * s[i] / (s[i] - s[i + 1]);
    }
    return s.back() == 0.0 ? x.back() : std::numeric_limits<double>::quiet_NaN();
}

int sign_changes(std::span<const double> v)
{
    int changes = 0, last = 0;
    for (double x : v) {
        const int s = (x > 0.0) - (x < 0.0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

Field2D mass_residual_field(const BackgroundFlow& bg, const Field2D& phi_hat)
{
    // Divergence form with x1 fluxes at half nodes; interior nodes only.
    const int n1 = phi_hat.n1(), n2 = phi_hat.n2();
    const double dx = phi_hat.grid().dx();
    const Field2D d2 = derivative(phi_hat, 0, 1);
    const Field2D d1 = derivative(phi_hat, 1, 0);
    Field2D flux2(phi_hat.grid(), n2), half(phi_hat.grid(), n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double p2 = d2(i, j);
            flux2(i, j) = flow_state(bg, i, d1(i, j), p2).rho * p2 / bg.n[i];
            if (i + 1 < n1) {
                const double n = nozzle_eval(bg.nozzle, bg.x1[i] + 0.5 * dx).n;
                const double u = (bg.phi_b[i + 1] - bg.phi_b[i] + phi_hat(i + 1, j) - phi_hat(i, j)) / dx;
                const double t = 0.5 * (p2 + d2(i + 1, j));
                half(i, j) = bernoulli_state(bg.gas, u * u + t * t / (n * n)).rho * n * u;
            }
        }
    const Field2D d2flux = derivative(flux2, 0, 1);
    Field2D mass(phi_hat.grid(), n2);
    for (int i = 1; i + 1 < n1; ++i)
        for (int j = 0; j < n2; ++j)
            mass(i, j) = (half(i, j) - half(i - 1, j)) / dx + d2flux(i, j);
    return mass;
}

DiagnosticsTable diagnostics(const TransonicSolution& sol, const BackgroundFlow& bg, double denominator_floor)
{
    DiagnosticsTable d;
    const Field2D& ph = sol.phi_hat;
    const int n1 = ph.n1(), n2 = ph.n2();
    const GradientField grad = GradientField::of(ph);

    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const FlowState s = flow_state(bg, i, grad.d1(i, j), grad.d2(i, j));
            const double e = bernoulli_energy(bg.gas, s.q_sq, s.rho);
            d.bernoulli_residual = std::max(d.bernoulli_residual, std::abs(e - bg.gas.c0) / bg.gas.c0);
        }
    const Field2D mass = mass_residual_field(bg, ph);
    d.mass_residual = l2_norm(mass);
    d.mass_residual_perturbation = l2_norm(mass - mass_residual_field(bg, Field2D(ph.grid(), n2)));

    const PointwiseCoefficients pc = pointwise_coefficients(bg, grad, denominator_floor);
    const Field2D f = rhs_f(bg, grad, denominator_floor);
    const Field2D d11 = derivative(ph, 2, 0), d12 = derivative(ph, 1, 1), d22 = derivative(ph, 0, 2);
    Field2D r(ph.grid(), n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            r(i, j) = pc.k(i, j) * d11(i, j) + pc.b(i, j) * d12(i, j) + d22(i, j)
                      - bg.alpha[i] * grad.d1(i, j) - f(i, j);
    d.equation_residual = l2_norm(r);

    d.entry_tangential_velocity.resize(n2);
    for (int j = 0; j < n2; ++j)
        d.entry_tangential_velocity[j] = grad.d2(0, j) / bg.n[0];

    d.sonic_line.resize(n2);
    d.k_sign_changes.resize(n2);
    std::vector<double> s(n1), krow(n1);
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const FlowState st = flow_state(bg, i, grad.d1(i, j), grad.d2(i, j));
            s[i] = st.c_sq - st.q_sq;
            krow[i] = pc.k(i, j);
        }
        d.sonic_line[j] = sonic_crossing(bg.x1, s);
        d.k_sign_changes[j] = sign_changes(krow);
        d.sonic_displacement = std::max(d.sonic_displacement, std::abs(d.sonic_line[j]));
    }
    return d;
}

double mode_amplitude(const Field2D& f, int m)
{
    double amp = 0.0;
    for (int i = 0; i < f.n1(); ++i) {
        const auto c = spectral::forward(f.row(i));
        const double a = (m == 0 || 2 * m == f.n2()) ? std::abs(c[m]) : 2.0 * std::abs(c[m]);
        amp = std::max(amp, a);
    }
    return amp;
}

std::pair<TransonicSolution, SolveReport> solve_transonic(const TransonicProblem& problem)
{
    problem.validate();
    const SolverConfig& cfg = problem.config;
    const Grid1D grid = problem.grid();
    const BackgroundFlow bg = solve_background(problem.gas, problem.nozzle, grid);
    const IdentityReport ids = background_identities(bg);

    const double g_norm = problem.epsilon_measured();
    const double threshold = cfg.tol * std::max(1.0, g_norm);
    IterationState state = initial_state(problem);
    bool converged = false;
    for (int it = 0; it < cfg.max_iter; ++it) {
        state = picard_step(state, problem, bg);
        if (state.step_norms.back() <= threshold) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "Picard iteration did not reach " << threshold << " in " << cfg.max_iter
           << " steps (last step " << state.step_norms.back() << ")";
        throw NoConvergence(os.str(), state.contraction_ratios);
    }

    TransonicSolution sol;
    sol.phi_hat = state.phi_hat;
    sol.phi = sol.phi_hat;
    sol.mach = Field2D(grid, cfg.n2);
    const GradientField grad = GradientField::of(sol.phi_hat);
    for (int i = 0; i < grid.size(); ++i)
        for (int j = 0; j < cfg.n2; ++j) {
            sol.phi(i, j) += bg.phi_b[i];
            const FlowState s = flow_state(bg, i, grad.d1(i, j), grad.d2(i, j));
            sol.mach(i, j) = std::sqrt(s.q_sq / s.c_sq);
        }
    const double phi_norm4 = sobolev_norm(sol.phi_hat, 4);
    sol.stability_ratio = g_norm > 0.0 ? phi_norm4 / g_norm : std::numeric_limits<double>::quiet_NaN();
    sol.state = state;

    const DiagnosticsTable diag = diagnostics(sol, bg, cfg.delta_floor);
    sol.sonic_line = diag.sonic_line;
    sol.bernoulli_residual = diag.bernoulli_residual;
    sol.mass_residual = diag.mass_residual;
    sol.equation_residual = diag.equation_residual;

    SolveReport rep;
    rep.set("status", "converged");
    rep.set("n1", cfg.n1);
    rep.set("n2", cfg.n2);
    rep.set("dx", grid.dx());
    rep.set("iterations", state.iterations);
    rep.set("g_norm5", g_norm);
    rep.set("phi_hat_norm4", phi_norm4);
    if (std::isnan(sol.stability_ratio))
        rep.set("stability_ratio", "undefined");
    else
        rep.set("stability_ratio", sol.stability_ratio);
    rep.set("step_norms", state.step_norms);
    rep.set("contraction_ratios", state.contraction_ratios);
    rep.set("kappa_history", state.kappa_history);
    rep.set("kappa0", cfg.kappa0);
    rep.set("mu", state.mu_used);
    rep.set("extension_attempts", state.extension_attempts);
    rep.set("identity.fd_mismatch", ids.fd_mismatch);
    rep.set("identity.delta1", ids.delta1);
    rep.set("identity.delta2", ids.delta2);
    for (const auto& [k, v] : state.conditions.rows())
        rep.set("conditions." + k, v);
    rep.set("energy.lhs", state.linear.energy.lhs);
    rep.set("energy.rhs_norm", state.linear.energy.rhs_norm);
    rep.set("energy.ratio", state.linear.energy.ratio);
    rep.set("energy.residual", state.linear.energy.residual_norm);
    rep.set("eps_values", state.linear.eps_values);
    rep.set("eps_differences", state.linear.eps_differences);
    rep.set("entry_value_max", state.linear.entry_value_max);
    rep.set("exit_derivative_max", state.linear.exit_derivative_max);
    rep.set("bernoulli_residual", diag.bernoulli_residual);
    rep.set("mass_residual", diag.mass_residual);
    rep.set("mass_residual_perturbation", diag.mass_residual_perturbation);
    rep.set("equation_residual", diag.equation_residual);
    rep.set("sonic_displacement", diag.sonic_displacement);
    int worst = 0;
    for (int c : diag.k_sign_changes)
        worst = std::max(worst, std::abs(c - 1));
    rep.set("k_sign_changes_max_deviation", worst);
    for (std::size_t w = 0; w < state.linear.warnings.size(); ++w)
        rep.set("warning." + std::to_string(w), state.linear.warnings[w]);
    return {std::move(sol), std::move(rep)};
}

std::vector<SweepRow> sweep(const TransonicProblem& base, std::span<const double> eps_list, int mode, int workers)
{
    auto run_one = [&base, mode](double eps) {
        TransonicProblem p = base;
        p.g = CircleSeries::from_cosine_modes({{mode, eps}});
        auto [sol, rep] = solve_transonic(p);
        SweepRow row;
        row.eps = eps;
        row.g_norm5 = p.epsilon_measured();
        row.phi_norm4 = sobolev_norm(sol.phi_hat, 4);
        row.stability_ratio = sol.stability_ratio;
        const auto& r = sol.state.contraction_ratios;
        row.max_contraction = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
        row.iterations = sol.state.iterations;
        double disp = 0.0;
        for (double x : sol.sonic_line)
            disp = std::max(disp, std::abs(x));
        row.sonic_displacement = disp;
        row.mode_amplitude = mode_amplitude(sol.phi_hat, mode);
        for (int m = 0; m <= sol.phi_hat.n2() / 2; ++m)
            if (m != mode)
                row.other_amplitude = std::max(row.other_amplitude, mode_amplitude(sol.phi_hat, m));
        return row;
    };

    std::vector<SweepRow> rows(eps_list.size());
    const std::size_t batch = static_cast<std::size_t>(std::max(1, workers));
    for (std::size_t start = 0; start < eps_list.size(); start += batch) {
        std::vector<std::future<SweepRow>> jobs;
        const std::size_t stop = std::min(eps_list.size(), start + batch);
        for (std::size_t k = start; k < stop; ++k)
            jobs.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred, run_one, eps_list[k]));
        for (std::size_t k = start; k < stop; ++k)
            rows[k] = jobs[k - start].get();
    }
    return rows;
}

}  // namespace transonic
