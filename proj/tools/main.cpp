#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transonic/config.hpp"
#include "transonic/errors.hpp"
#include "transonic/run.hpp"

namespace {

const char* kSchemas = R"(Outputs (in --out-dir):
  background    background.csv  x1,n,u_b,rho_b,c_b,mach,tau,k_b,alpha,d1k_b
                report.txt      mass-flux residual, Mach numbers, identity margins
  verify        conditions.txt  condition margins (key = value), also printed as a table
                coefficients.txt  background coefficient set for solve-linear
  solve-linear  linear_solution.csv  x1,x2,value on [-1,1]
                report.txt      energy ratio and eps-continuation differences
  solve         solution.csv, potential.csv, mach.csv  x1,x2,value
                sonic_line.csv  x2,x1_sonic
                report.txt      iteration and residual diagnostics
  sweep         sweep.csv       eps,g_norm5,phi_norm4,stability_ratio,max_contraction,
                                iterations,sonic_displacement,mode_amplitude,other_amplitude
Every run writes config.resolved. Exit status: 0 ok, 1 config error, 2 solver error.)";

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transonic nozzle potential-flow solver"};
    app.footer(kSchemas);
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    app.add_option("-c,--config", config_path, "key = value config file");
    app.add_option("-o,--out-dir", out_dir, "output directory (overrides out_dir)");
    app.add_option("-s,--set", overrides, "extra key=value setting, repeatable");

    transonic::RunOptions options;
    std::string eps_list;
    app.add_subcommand("background", "solve the choked background flow");
    app.add_subcommand("verify", "check the linear-theory hypotheses on the background coefficients");
    auto* linear = app.add_subcommand("solve-linear", "frozen-coefficient solve with eps continuation");
    linear->add_option("--coefficients", options.coefficients_path, "saved coefficient set");
    linear->add_flag("--unit-rhs", options.unit_rhs, "replace the right-hand side by h");
    app.add_subcommand("solve", "full nonlinear solve");
    auto* sw = app.add_subcommand("sweep", "stability-ratio table over perturbation sizes");
    sw->add_option("--eps-list", eps_list, "comma-separated amplitudes");

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    transonic::RunConfig cfg;
    try {
        cfg = config_path.empty() ? transonic::parse_config_text("") : transonic::parse_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw transonic::ParseError(0, "--set expects key=value, got '" + kv + "'");
            transonic::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!eps_list.empty())
            transonic::apply_setting(cfg, "sweep.eps_list", eps_list);
        if (!out_dir.empty())
            transonic::apply_setting(cfg, "out_dir", out_dir);
        transonic::validate_ranges(cfg);
    } catch (const transonic::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return transonic::kExitConfigError;
    }
    return transonic::run(sub, cfg, options, std::cout, std::cerr);
}
