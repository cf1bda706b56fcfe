#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "transonic/grid.hpp"

namespace transonic {

// Scalar field on grid nodes x1_i times periodic nodes x2_j = 2 pi j / n2.
// Storage is row-major by x1.
class Field2D {
public:
    Field2D() = default;
    Field2D(const Grid1D& grid, int n2, double fill = 0.0);

    static Field2D from_function(const Grid1D& grid, int n2,
                                 const std::function<double(double, double)>& f);

    const Grid1D& grid() const { return grid_; }
    int n1() const { return grid_.size(); }
    int n2() const { return n2_; }
    double x1(int i) const { return grid_.node(i); }
    double x2(int j) const;

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * n2_ + j]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * n2_ + j]; }
    std::span<double> row(int i) { return {values_.data() + static_cast<std::size_t>(i) * n2_, static_cast<std::size_t>(n2_)}; }
    std::span<const double> row(int i) const { return {values_.data() + static_cast<std::size_t>(i) * n2_, static_cast<std::size_t>(n2_)}; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    // First grid.n1() rows, i.e. the part on [-1, 1].
    Field2D restricted_to_physical() const;
    // Same values on a longer grid (new rows filled with fill).
    Field2D padded_to(const Grid1D& longer, double fill = 0.0) const;

    double max_abs() const;

    Field2D& operator+=(const Field2D& o);
    Field2D& operator-=(const Field2D& o);
    Field2D& operator*=(double s);

private:
    Grid1D grid_;
    int n2_ = 0;
    std::vector<double> values_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double s, Field2D a);

// d1^order1 d2^order2: finite differences in x1, spectral in x2.
Field2D derivative(const Field2D& f, int order1, int order2);

// Trapezoid in x1 times the periodic rule in x2.
double l2_norm(const Field2D& f);
double sobolev_norm(const Field2D& f, int s);

// Real boundary datum on the circle, stored as complex coefficients g_m, m >= 0
// (g_{-m} = conj(g_m)).
class CircleSeries {
public:
    CircleSeries() = default;
    explicit CircleSeries(std::vector<std::complex<double>> nonnegative_modes);

    // sum_m amplitude_m cos(m x2)
    static CircleSeries from_cosine_modes(const std::map<int, double>& amplitudes);
    static CircleSeries from_samples(std::span<const double> samples);

    int max_mode() const { return static_cast<int>(coeffs_.size()) - 1; }
    std::complex<double> coefficient(int m) const;
    bool is_zero() const;

    double value(double x2) const;
    std::vector<double> sample(int n2, int derivative_order = 0) const;

private:
    std::vector<std::complex<double>> coeffs_;
};

double circle_norm(const CircleSeries& g, int s);

void write_field_csv(std::ostream& os, const Field2D& f);

}  // namespace transonic
