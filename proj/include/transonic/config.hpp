#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "transonic/gas.hpp"
#include "transonic/iteration.hpp"

namespace transonic {

struct RunConfig {
    GasModel gas;
    Nozzle nozzle;
    SolverConfig solver;
    std::map<int, double> g_modes;  // g = sum amplitude cos(m x2)
    std::vector<double> sweep_eps{1e-3, 3e-4, 1e-4};
    int sweep_mode = 1;
    int sweep_workers = 1;
    std::string out_dir = "out";

    std::set<std::string> explicit_keys;

    TransonicProblem problem() const;
    std::vector<std::string> defaulted_keys() const;
    // key = value lines; defaulted keys carry a trailing "# default".
    std::string emit() const;
    bool same_values(const RunConfig& other) const;
};

const std::vector<std::string>& known_keys();

// Throws ParseError, UnknownKeyError, RangeError.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Applies one key = value assignment and re-validates.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);
void validate_ranges(const RunConfig& cfg);

std::vector<double> parse_number_list(const std::string& text, int line = 0);

}  // namespace transonic
