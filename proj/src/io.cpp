#include "transonic/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <istream>
#include <ostream>
#include <sstream>

#include "transonic/errors.hpp"

namespace transonic {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void SolveReport::set(const std::string& key, const std::string& value)
{
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void SolveReport::set(const std::string& key, double value) { set(key, format_number(value)); }
void SolveReport::set(const std::string& key, int value) { set(key, std::to_string(value)); }

void SolveReport::set(const std::string& key, const std::vector<double>& values)
{
    std::string s;
    for (std::size_t k = 0; k < values.size(); ++k)
        s += (k ? "," : "") + format_number(values[k]);
    set(key, s);
}

std::optional<std::string> SolveReport::get(const std::string& key) const
{
    for (const auto& [k, v] : entries_)
        if (k == key)
            return v;
    return std::nullopt;
}

double SolveReport::number(const std::string& key) const
{
    const auto v = get(key);
    if (!v)
        throw std::out_of_range("report has no key " + key);
    return std::stod(*v);
}

void SolveReport::write(std::ostream& os) const
{
    for (const auto& [k, v] : entries_)
        os << k << " = " << v << '\n';
}

void SolveReport::merge(const SolveReport& other, const std::string& prefix)
{
    for (const auto& [k, v] : other.entries_)
        set(prefix + k, v);
}

namespace io {

namespace {

void row(std::ostream& os, std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values) {
        if (!first)
            os << ',';
        os << format_number(v);
        first = false;
    }
    os << '\n';
}

}  // namespace

void write_background_csv(std::ostream& os, const BackgroundFlow& bg)
{
    os << "x1,n,u_b,rho_b,c_b,mach,tau,k_b,alpha,d1k_b\n";
    for (int i = 0; i < bg.size(); ++i)
        row(os, {bg.x1[i], bg.n[i], bg.u_b[i], bg.rho_b[i], std::sqrt(bg.c_b_sq[i]), bg.mach(i), bg.tau[i],
                 bg.k_b[i], bg.alpha[i], bg.d1k_b[i]});
}

void write_coefficients(std::ostream& os, const CoefficientSet& cs)
{
    const Grid1D& g = cs.grid();
    os << "# transonic coefficient set\n";
    os << "n1 = " << g.n1() << '\n';
    os << "n_ext = " << g.n_ext() << '\n';
    os << "n2 = " << cs.n2() << '\n';
    os << "mu = " << format_number(cs.mu) << '\n';
    os << "k_plus = " << format_number(cs.k_plus) << '\n';
    os << "alpha_plus = " << format_number(cs.alpha_plus) << '\n';
    os << "delta_star = " << format_number(cs.delta_star) << '\n';
    os << "nu_star = " << format_number(cs.nu_star) << '\n';
    os << "x1,x2,k,b,a,alpha_h,rhs\n";
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < cs.n2(); ++j)
            row(os, {cs.k_field.x1(i), cs.k_field.x2(j), cs.k_field(i, j), cs.b_field(i, j), cs.a_field(i, j),
                     cs.alpha_h_field(i, j), cs.rhs_field(i, j)});
}

CoefficientSet read_coefficients(std::istream& is)
{
    std::string line;
    int n1 = 0, n_ext = 0, n2 = 0, lineno = 0;
    CoefficientSet cs;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        if (line.rfind("x1,", 0) == 0)
            break;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(lineno, "malformed coefficient header");
        const std::string key = line.substr(0, line.find_last_not_of(' ', eq - 1) + 1);
        const double v = std::stod(line.substr(eq + 1));
        if (key == "n1") n1 = static_cast<int>(v);
        else if (key == "n_ext") n_ext = static_cast<int>(v);
        else if (key == "n2") n2 = static_cast<int>(v);
        else if (key == "mu") cs.mu = v;
        else if (key == "k_plus") cs.k_plus = v;
        else if (key == "alpha_plus") cs.alpha_plus = v;
        else if (key == "delta_star") cs.delta_star = v;
        else if (key == "nu_star") cs.nu_star = v;
        else throw ParseError(lineno, "unknown coefficient header key " + key);
    }
    if (n1 < 5 || n2 < 8)
        throw ParseError(lineno, "coefficient header lacks grid sizes");
    const Grid1D base = Grid1D::make(n1);
    const Grid1D grid = Grid1D::make(n1, n_ext * base.dx());
    for (Field2D* f : {&cs.k_field, &cs.b_field, &cs.a_field, &cs.alpha_h_field, &cs.rhs_field})
        *f = Field2D(grid, n2);
    for (int i = 0; i < grid.size(); ++i)
        for (int j = 0; j < n2; ++j) {
            if (!std::getline(is, line))
                throw ParseError(lineno, "coefficient table ends early");
            ++lineno;
            std::stringstream ss(line);
            std::string cell;
            double v[7];
            for (double& x : v) {
                if (!std::getline(ss, cell, ','))
                    throw ParseError(lineno, "expected 7 columns");
                x = std::stod(cell);
            }
            cs.k_field(i, j) = v[2];
            cs.b_field(i, j) = v[3];
            cs.a_field(i, j) = v[4];
            cs.alpha_h_field(i, j) = v[5];
            cs.rhs_field(i, j) = v[6];
        }
    return cs;
}

void write_sonic_line_csv(std::ostream& os, const std::vector<double>& sonic_line, int n2)
{
    os << "x2,x1_sonic\n";
    for (int j = 0; j < n2; ++j)
        row(os, {2.0 * std::numbers::pi * j / n2, sonic_line[j]});
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << "eps,g_norm5,phi_norm4,stability_ratio,max_contraction,iterations,sonic_displacement,"
          "mode_amplitude,other_amplitude\n";
    for (const SweepRow& r : rows)
        row(os, {r.eps, r.g_norm5, r.phi_norm4, r.stability_ratio, r.max_contraction, double(r.iterations),
                 r.sonic_displacement, r.mode_amplitude, r.other_amplitude});
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    write_file(path, [&](std::ostream& os) { os << text; });
}

}  // namespace io
}  // namespace transonic
