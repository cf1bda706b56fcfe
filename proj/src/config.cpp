#include "transonic/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "transonic/errors.hpp"
#include "transonic/report.hpp"

namespace transonic {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& key, int line)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ParseError(line, "expected a number for " + key + ", got '" + t + "'");
    return v;
}

int to_int(const std::string& text, const std::string& key, int line)
{
    const std::string t = trim(text);
    int v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ParseError(line, "expected an integer for " + key + ", got '" + t + "'");
    return v;
}

std::string list_text(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? ", " : "") + format_number(v[k]);
    return s;
}

const std::string kModePrefix = "g.mode.";

void range(bool ok, const std::string& what)
{
    if (!ok)
        throw RangeError(what);
}

}  // namespace

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys{
        "gas.gamma", "gas.kappa", "gas.c0", "nozzle.n0", "nozzle.a_quad",
        "solver.n1", "solver.n2", "solver.eps_schedule", "solver.linear_tol", "solver.mu",
        "solver.l_ext", "solver.delta_floor", "solver.delta_ext",
        "iteration.tol", "iteration.max_iter", "iteration.relax", "iteration.eps0", "iteration.kappa0",
        "sweep.eps_list", "sweep.mode", "sweep.workers", "out_dir"};
    return keys;
}

std::vector<double> parse_number_list(const std::string& text, int line)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(item, "list entry", line));
    if (out.empty())
        throw ParseError(line, "empty list");
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value, int line)
{
    const std::string key = trim(raw_key), value = trim(raw_value);
    SolverConfig& s = cfg.solver;
    if (key.rfind(kModePrefix, 0) == 0) {
        const int m = to_int(key.substr(kModePrefix.size()), key, line);
        range(m >= 0, "mode number must be nonnegative: " + key);
        cfg.g_modes[m] = to_double(value, key, line);
    } else if (key == "gas.gamma") cfg.gas.gamma = to_double(value, key, line);
    else if (key == "gas.kappa") cfg.gas.kappa = to_double(value, key, line);
    else if (key == "gas.c0") cfg.gas.c0 = to_double(value, key, line);
    else if (key == "nozzle.n0") cfg.nozzle.n0 = to_double(value, key, line);
    else if (key == "nozzle.a_quad") cfg.nozzle.a_quad = to_double(value, key, line);
    else if (key == "solver.n1") s.n1 = to_int(value, key, line);
    else if (key == "solver.n2") s.n2 = to_int(value, key, line);
    else if (key == "solver.eps_schedule") s.eps_schedule = parse_number_list(value, line);
    else if (key == "solver.linear_tol") s.linear_tol = to_double(value, key, line);
    else if (key == "solver.mu") s.mu = to_double(value, key, line);
    else if (key == "solver.l_ext") s.l_ext = to_double(value, key, line);
    else if (key == "solver.delta_floor") s.delta_floor = to_double(value, key, line);
    else if (key == "solver.delta_ext") s.delta_ext = to_double(value, key, line);
    else if (key == "iteration.tol") s.tol = to_double(value, key, line);
    else if (key == "iteration.max_iter") s.max_iter = to_int(value, key, line);
    else if (key == "iteration.relax") s.relax = to_double(value, key, line);
    else if (key == "iteration.eps0") s.eps0 = to_double(value, key, line);
    else if (key == "iteration.kappa0") s.kappa0 = to_double(value, key, line);
    else if (key == "sweep.eps_list") cfg.sweep_eps = parse_number_list(value, line);
    else if (key == "sweep.mode") cfg.sweep_mode = to_int(value, key, line);
    else if (key == "sweep.workers") cfg.sweep_workers = to_int(value, key, line);
    else if (key == "out_dir") {
        if (value.empty())
            throw ParseError(line, "out_dir must not be empty");
        cfg.out_dir = value;
    } else {
        throw UnknownKeyError("unknown key '" + key + "'" + (line ? " on line " + std::to_string(line) : ""));
    }
    cfg.explicit_keys.insert(key);
    if (!cfg.explicit_keys.count("gas.c0") && (key == "gas.gamma" || key == "gas.kappa"))
        cfg.gas.c0 = GasModel::with_unit_sonic_density(cfg.gas.gamma, cfg.gas.kappa).c0;
}

void validate_ranges(const RunConfig& cfg)
{
    const SolverConfig& s = cfg.solver;
    range(cfg.gas.gamma > 1.0, "gas.gamma must exceed 1");
    range(cfg.gas.kappa > 0.0, "gas.kappa must be positive");
    range(cfg.gas.c0 > 0.0, "gas.c0 must be positive");
    range(cfg.nozzle.n0 > 0.0, "nozzle.n0 must be positive");
    range(cfg.nozzle.a_quad > 0.0, "nozzle.a_quad must be positive");
    range(s.n1 >= 33 && s.n1 % 2 == 1, "solver.n1 must be odd and at least 33");
    range(s.n2 >= 8 && (s.n2 & (s.n2 - 1)) == 0, "solver.n2 must be a power of two >= 8");
    for (std::size_t k = 0; k < s.eps_schedule.size(); ++k) {
        range(s.eps_schedule[k] >= 0.0, "solver.eps_schedule entries must be nonnegative");
        range(k == 0 || s.eps_schedule[k] < s.eps_schedule[k - 1], "solver.eps_schedule must decrease");
    }
    range(s.linear_tol > 0.0 && s.linear_tol < 1.0, "solver.linear_tol must lie in (0, 1)");
    range(s.mu > 0.0, "solver.mu must be positive");
    range(s.l_ext > 0.0, "solver.l_ext must be positive");
    range(s.delta_floor > 0.0, "solver.delta_floor must be positive");
    range(s.delta_ext > 0.0, "solver.delta_ext must be positive");
    range(s.tol > 0.0, "iteration.tol must be positive");
    range(s.max_iter >= 1, "iteration.max_iter must be at least 1");
    range(s.relax > 0.0 && s.relax <= 1.0, "iteration.relax must lie in (0, 1]");
    range(s.eps0 > 0.0, "iteration.eps0 must be positive");
    range(s.kappa0 > 0.0, "iteration.kappa0 must be positive");
    for (const auto& [m, a] : cfg.g_modes)
        range(2 * m < s.n2, "g.mode." + std::to_string(m) + " is not resolved by solver.n2");
    for (double e : cfg.sweep_eps)
        range(e >= 0.0, "sweep.eps_list entries must be nonnegative");
    range(cfg.sweep_mode >= 0 && 2 * cfg.sweep_mode < s.n2, "sweep.mode is not resolved by solver.n2");
    range(cfg.sweep_workers >= 1, "sweep.workers must be at least 1");
}

RunConfig parse_config_text(const std::string& text)
{
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const std::string content = trim(raw.substr(0, raw.find('#')));
        if (content.empty())
            continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        if (key.empty())
            throw ParseError(line, "missing key");
        apply_setting(cfg, key, content.substr(eq + 1), line);
    }
    validate_ranges(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

TransonicProblem RunConfig::problem() const
{
    return {gas, nozzle, CircleSeries::from_cosine_modes(g_modes), solver};
}

std::vector<std::string> RunConfig::defaulted_keys() const
{
    std::vector<std::string> out;
    for (const auto& k : known_keys())
        if (!explicit_keys.count(k))
            out.push_back(k);
    return out;
}

std::string RunConfig::emit() const
{
    const SolverConfig& s = solver;
    const std::vector<std::pair<std::string, std::string>> values{
        {"gas.gamma", format_number(gas.gamma)},
        {"gas.kappa", format_number(gas.kappa)},
        {"gas.c0", format_number(gas.c0)},
        {"nozzle.n0", format_number(nozzle.n0)},
        {"nozzle.a_quad", format_number(nozzle.a_quad)},
        {"solver.n1", std::to_string(s.n1)},
        {"solver.n2", std::to_string(s.n2)},
        {"solver.eps_schedule", list_text(s.eps_schedule)},
        {"solver.linear_tol", format_number(s.linear_tol)},
        {"solver.mu", format_number(s.mu)},
        {"solver.l_ext", format_number(s.l_ext)},
        {"solver.delta_floor", format_number(s.delta_floor)},
        {"solver.delta_ext", format_number(s.delta_ext)},
        {"iteration.tol", format_number(s.tol)},
        {"iteration.max_iter", std::to_string(s.max_iter)},
        {"iteration.relax", format_number(s.relax)},
        {"iteration.eps0", format_number(s.eps0)},
        {"iteration.kappa0", format_number(s.kappa0)},
        {"sweep.eps_list", list_text(sweep_eps)},
        {"sweep.mode", std::to_string(sweep_mode)},
        {"sweep.workers", std::to_string(sweep_workers)},
        {"out_dir", out_dir},
    };
    std::ostringstream os;
    for (const auto& [k, v] : values) {
        os << k << " = " << v;
        if (!explicit_keys.count(k))
            os << "  # default";
        os << '\n';
    }
    for (const auto& [m, a] : g_modes)
        os << kModePrefix << m << " = " << format_number(a) << '\n';
    return os.str();
}

bool RunConfig::same_values(const RunConfig& o) const
{
    const SolverConfig &a = solver, &b = o.solver;
    return gas.gamma == o.gas.gamma && gas.kappa == o.gas.kappa && gas.c0 == o.gas.c0
           && nozzle.n0 == o.nozzle.n0 && nozzle.a_quad == o.nozzle.a_quad && a.n1 == b.n1 && a.n2 == b.n2
           && a.eps_schedule == b.eps_schedule && a.linear_tol == b.linear_tol && a.mu == b.mu
           && a.l_ext == b.l_ext && a.delta_floor == b.delta_floor && a.delta_ext == b.delta_ext
           && a.tol == b.tol && a.max_iter == b.max_iter && a.relax == b.relax && a.eps0 == b.eps0
           && a.kappa0 == b.kappa0 && g_modes == o.g_modes && sweep_eps == o.sweep_eps
           && sweep_mode == o.sweep_mode && sweep_workers == o.sweep_workers && out_dir == o.out_dir;
}

}  // namespace transonic
