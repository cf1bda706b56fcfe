#include "transonic/run.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "transonic/errors.hpp"
#include "transonic/io.hpp"

namespace transonic {

namespace fs = std::filesystem;

namespace {

CoefficientSet background_set(const RunConfig& cfg, const BackgroundFlow& bg)
{
    const int n2 = cfg.solver.n2;
    const GradientField zero = GradientField::zero(bg.grid, n2);
    const PointwiseCoefficients pc = pointwise_coefficients(bg, zero, cfg.solver.delta_floor);
    const Field2D f = rhs_f(bg, zero, cfg.solver.delta_floor);
    return extend_coefficients(pc.k, pc.b, f, bg, cfg.solver.mu, cfg.solver.l_ext, cfg.solver.delta_ext);
}

void echo_config(const RunConfig& cfg, std::ostream& err)
{
    for (const auto& key : cfg.defaulted_keys())
        err << "config: " << key << " defaulted\n";
    io::write_text(fs::path(cfg.out_dir) / "config.resolved", cfg.emit());
}

int run_background(const RunConfig& cfg, std::ostream& out)
{
    const BackgroundFlow bg = solve_background(cfg.gas, cfg.nozzle, Grid1D::make(cfg.solver.n1));
    const fs::path dir(cfg.out_dir);
    io::write_file(dir / "background.csv", [&](std::ostream& os) { io::write_background_csv(os, bg); });
    const IdentityReport ids = background_identities(bg);
    SolveReport rep;
    double worst = 0.0;
    for (double r : mass_flux_residuals(bg))
        worst = std::max(worst, r);
    rep.set("mass_flux", bg.mass_flux);
    rep.set("mass_flux_residual_max", worst);
    rep.set("mach_entry", bg.mach(0));
    rep.set("mach_throat", bg.mach(bg.grid.throat_index()));
    rep.set("mach_exit", bg.mach(bg.size() - 1));
    rep.set("identity.fd_mismatch", ids.fd_mismatch);
    rep.set("identity.delta1", ids.delta1);
    rep.set("identity.delta2", ids.delta2);
    io::write_file(dir / "report.txt", [&](std::ostream& os) { rep.write(os); });
    rep.write(out);
    return kExitOk;
}

int run_verify(const RunConfig& cfg, std::ostream& out)
{
    const BackgroundFlow bg = solve_background(cfg.gas, cfg.nozzle, Grid1D::make(cfg.solver.n1));
    CoefficientSet cs = background_set(cfg, bg);
    const ConditionReport rep = verify_conditions(cs);
    cs.delta_star = rep.delta_star;
    cs.nu_star = rep.nu_star;
    const fs::path dir(cfg.out_dir);
    io::write_file(dir / "coefficients.txt", [&](std::ostream& os) { io::write_coefficients(os, cs); });
    SolveReport text;
    text.set("mu", cs.mu);
    for (const auto& [k, v] : rep.rows())
        text.set(k, v);
    if (!rep.pass)
        text.set("failure", rep.failure);
    io::write_file(dir / "conditions.txt", [&](std::ostream& os) { text.write(os); });

    out << std::left << std::setw(16) << "condition" << "margin\n";
    for (const auto& [k, v] : rep.rows())
        out << std::setw(16) << k << format_number(v) << '\n';
    if (!rep.pass)
        throw ConditionError(rep.failure);
    return kExitOk;
}

int run_solve_linear(const RunConfig& cfg, const RunOptions& opt, std::ostream& out)
{
    const fs::path dir(cfg.out_dir);
    const fs::path src = opt.coefficients_path.empty() ? dir / "coefficients.txt" : fs::path(opt.coefficients_path);
    std::ifstream in(src);
    if (!in)
        throw ConfigError("cannot read coefficient set " + src.string());
    CoefficientSet cs = io::read_coefficients(in);
    if (opt.unit_rhs)
        cs.rhs_field = cs.a_field;
    const ContinuationResult res = solve_with_continuation(cs, cfg.solver.eps_schedule, cfg.solver.linear_tol);
    io::write_file(dir / "linear_solution.csv", [&](std::ostream& os) { write_field_csv(os, res.solution); });
    SolveReport rep;
    rep.set("energy.lhs", res.energy.lhs);
    rep.set("energy.rhs_norm", res.energy.rhs_norm);
    rep.set("energy.ratio", res.energy.ratio);
    rep.set("energy.residual", res.energy.residual_norm);
    rep.set("eps_values", res.eps_values);
    rep.set("eps_differences", res.eps_differences);
    rep.set("entry_value_max", res.entry_value_max);
    rep.set("exit_derivative_max", res.exit_derivative_max);
    for (std::size_t w = 0; w < res.warnings.size(); ++w)
        rep.set("warning." + std::to_string(w), res.warnings[w]);
    io::write_file(dir / "report.txt", [&](std::ostream& os) { rep.write(os); });
    rep.write(out);
    return kExitOk;
}

int run_solve(const RunConfig& cfg, std::ostream& out)
{
    const TransonicProblem problem = cfg.problem();
    auto [sol, rep] = solve_transonic(problem);
    const fs::path dir(cfg.out_dir);
    io::write_file(dir / "solution.csv", [&](std::ostream& os) { write_field_csv(os, sol.phi_hat); });
    io::write_file(dir / "potential.csv", [&](std::ostream& os) { write_field_csv(os, sol.phi); });
    io::write_file(dir / "mach.csv", [&](std::ostream& os) { write_field_csv(os, sol.mach); });
    io::write_file(dir / "sonic_line.csv",
                   [&](std::ostream& os) { io::write_sonic_line_csv(os, sol.sonic_line, cfg.solver.n2); });
    io::write_file(dir / "report.txt", [&](std::ostream& os) { rep.write(os); });
    rep.write(out);
    return kExitOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& out)
{
    const std::vector<SweepRow> rows = sweep(cfg.problem(), cfg.sweep_eps, cfg.sweep_mode, cfg.sweep_workers);
    const fs::path dir(cfg.out_dir);
    io::write_file(dir / "sweep.csv", [&](std::ostream& os) { io::write_sweep_csv(os, rows); });
    SolveReport rep;
    rep.set("rows", static_cast<int>(rows.size()));
    rep.set("mode", cfg.sweep_mode);
    std::vector<double> ratios;
    for (const auto& r : rows)
        ratios.push_back(r.stability_ratio);
    rep.set("stability_ratios", ratios);
    io::write_file(dir / "report.txt", [&](std::ostream& os) { rep.write(os); });
    io::write_sweep_csv(out, rows);
    return kExitOk;
}

}  // namespace

int run(const std::string& subcommand, const RunConfig& cfg, const RunOptions& options, std::ostream& out,
        std::ostream& err)
{
    try {
        validate_ranges(cfg);
        echo_config(cfg, err);
        if (subcommand == "background")
            return run_background(cfg, out);
        if (subcommand == "verify")
            return run_verify(cfg, out);
        if (subcommand == "solve-linear")
            return run_solve_linear(cfg, options, out);
        if (subcommand == "solve")
            return run_solve(cfg, out);
        if (subcommand == "sweep")
            return run_sweep(cfg, out);
        throw ConfigError("unknown subcommand '" + subcommand + "'");
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolverError;
    }
}

}  // namespace transonic
