#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "transonic/config.hpp"

namespace transonic {

struct RunOptions {
    std::string coefficients_path;  // solve-linear input; defaults to out_dir/coefficients.txt
    bool unit_rhs = false;          // solve-linear with rhs = h
};

enum ExitStatus : int { kExitOk = 0, kExitConfigError = 1, kExitSolverError = 2 };

// Runs background | verify | solve-linear | solve | sweep, writing into cfg.out_dir.
int run(const std::string& subcommand, const RunConfig& cfg, const RunOptions& options, std::ostream& out,
        std::ostream& err);

}  // namespace transonic
