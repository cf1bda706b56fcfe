#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace transonic::spectral {

// Signed wavenumber of FFT bin q for n samples; the Nyquist bin maps to +n/2.
int wavenumber(int q, int n);

// Normalized spectrum: samples = sum_q c_q exp(i m_q x).
std::vector<std::complex<double>> forward(std::span<const double> samples);
std::vector<double> inverse(const std::vector<std::complex<double>>& spectrum);

// d^order/dx^order of periodic samples on [0, 2pi). Odd orders drop the Nyquist bin.
void differentiate(std::span<const double> in, std::span<double> out, int order);

Eigen::MatrixXd differentiation_matrix(int n, int order);

// Product c*u evaluated on a 3n/2 padded grid and truncated back to n modes.
std::vector<double> dealiased_product(std::span<const double> c, std::span<const double> u);
// Matrix P with P*u == dealiased_product(c, u).
Eigen::MatrixXd dealiased_product_matrix(std::span<const double> c);

}  // namespace transonic::spectral
