#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "transonic/background.hpp"
#include "transonic/coefficients.hpp"
#include "transonic/iteration.hpp"
#include "transonic/report.hpp"

namespace transonic::io {

// Columns x1,n,u_b,rho_b,c_b,mach,tau,k_b,alpha,d1k_b.
void write_background_csv(std::ostream& os, const BackgroundFlow& bg);

// Header lines followed by columns x1,x2,k,b,a,alpha_h,rhs.
void write_coefficients(std::ostream& os, const CoefficientSet& cs);
CoefficientSet read_coefficients(std::istream& is);

// Columns x2,x1_sonic.
void write_sonic_line_csv(std::ostream& os, const std::vector<double>& sonic_line, int n2);

// Columns eps,g_norm5,phi_norm4,stability_ratio,max_contraction,iterations,sonic_displacement,mode_amplitude,other_amplitude.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer);

}  // namespace transonic::io

#include <fstream>
#include <stdexcept>

template <class Writer>
void transonic::io::write_file(const std::filesystem::path& path, Writer&& writer)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + path.string());
    writer(os);
}
