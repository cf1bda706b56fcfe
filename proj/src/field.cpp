#include "transonic/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "transonic/fd.hpp"
#include "transonic/spectral.hpp"

namespace transonic {

Field2D::Field2D(const Grid1D& grid, int n2, double fill)
    : grid_(grid), n2_(n2), values_(static_cast<std::size_t>(grid.size()) * n2, fill)
{
    if (n2 < 8 || (n2 & (n2 - 1)) != 0)
        throw std::invalid_argument("n2 must be a power of two >= 8");
}

Field2D Field2D::from_function(const Grid1D& grid, int n2,
                               const std::function<double(double, double)>& f)
{
    Field2D out(grid, n2);
    for (int i = 0; i < out.n1(); ++i)
        for (int j = 0; j < n2; ++j)
            out(i, j) = f(out.x1(i), out.x2(j));
    return out;
}

double Field2D::x2(int j) const
{
    return 2.0 * std::numbers::pi * j / n2_;
}

Field2D Field2D::restricted_to_physical() const
{
    Field2D out(grid_.physical(), n2_);
    std::copy_n(values_.begin(), out.values_.size(), out.values_.begin());
    return out;
}

Field2D Field2D::padded_to(const Grid1D& longer, double fill) const
{
    if (longer.n1() != grid_.n1() || longer.size() < grid_.size())
        throw std::invalid_argument("padding target must extend the same grid");
    Field2D out(longer, n2_, fill);
    std::copy(values_.begin(), values_.end(), out.values_.begin());
    return out;
}

double Field2D::max_abs() const
{
    double m = 0.0;
    for (double v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

Field2D& Field2D::operator+=(const Field2D& o)
{
    if (o.values_.size() != values_.size())
        throw std::invalid_argument("field shape mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] += o.values_[k];
    return *this;
}

Field2D& Field2D::operator-=(const Field2D& o)
{
    if (o.values_.size() != values_.size())
        throw std::invalid_argument("field shape mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k)
        values_[k] -= o.values_[k];
    return *this;
}

Field2D& Field2D::operator*=(double s)
{
    for (double& v : values_)
        v *= s;
    return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
Field2D operator*(double s, Field2D a) { return a *= s; }

namespace {

Field2D x2_derivative(const Field2D& f, int order)
{
    if (order == 0)
        return f;
    Field2D out(f.grid(), f.n2());
    for (int i = 0; i < f.n1(); ++i)
        spectral::differentiate(f.row(i), out.row(i), order);
    return out;
}

Field2D x1_derivative(const Field2D& f, int order)
{
    if (order == 0)
        return f;
    const int n = f.n1();
    Field2D out(f.grid(), f.n2());
    for (int i = 0; i < n; ++i) {
        const fd::Stencil s = fd::node_stencil(order, i, n, f.grid().dx());
        auto dst = out.row(i);
        for (std::size_t k = 0; k < s.weights.size(); ++k) {
            const auto src = f.row(s.first + static_cast<int>(k));
            const double w = s.weights[k];
            for (int j = 0; j < f.n2(); ++j)
                dst[j] += w * src[j];
        }
    }
    return out;
}

}  // namespace

Field2D derivative(const Field2D& f, int order1, int order2)
{
    if (order1 < 0 || order2 < 0)
        throw std::invalid_argument("negative derivative order");
    return x1_derivative(x2_derivative(f, order2), order1);
}

double l2_norm(const Field2D& f)
{
    const double dx = f.grid().dx();
    const double w2 = 2.0 * std::numbers::pi / f.n2();
    double sum = 0.0;
    for (int i = 0; i < f.n1(); ++i) {
        double row = 0.0;
        for (double v : f.row(i))
            row += v * v;
        const double w1 = (i == 0 || i == f.n1() - 1) ? 0.5 * dx : dx;
        sum += w1 * row;
    }
    return std::sqrt(sum * w2);
}

double sobolev_norm(const Field2D& f, int s)
{
    if (s < 0)
        throw std::invalid_argument("negative Sobolev index");
    double sum = 0.0;
    for (int j = 0; j <= s; ++j) {
        const Field2D d2 = x2_derivative(f, j);
        for (int i = 0; i + j <= s; ++i) {
            const double v = l2_norm(x1_derivative(d2, i));
            sum += v * v;
        }
    }
    return std::sqrt(sum);
}

CircleSeries::CircleSeries(std::vector<std::complex<double>> nonnegative_modes)
    : coeffs_(std::move(nonnegative_modes))
{
    if (!coeffs_.empty())
        coeffs_[0] = coeffs_[0].real();
}

CircleSeries CircleSeries::from_cosine_modes(const std::map<int, double>& amplitudes)
{
    int top = 0;
    for (const auto& [m, a] : amplitudes) {
        if (m < 0)
            throw std::invalid_argument("negative mode number");
        top = std::max(top, m);
    }
    std::vector<std::complex<double>> c(top + 1, 0.0);
    for (const auto& [m, a] : amplitudes)
        c[m] += (m == 0) ? a : 0.5 * a;
    return CircleSeries(std::move(c));
}

CircleSeries CircleSeries::from_samples(std::span<const double> samples)
{
    const auto s = spectral::forward(samples);
    const int n = static_cast<int>(s.size());
    std::vector<std::complex<double>> c(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m)
        c[m] = s[m];
    if (n % 2 == 0)
        c[n / 2] = 0.5 * s[n / 2].real();
    return CircleSeries(std::move(c));
}

std::complex<double> CircleSeries::coefficient(int m) const
{
    const int a = std::abs(m);
    if (a >= static_cast<int>(coeffs_.size()))
        return 0.0;
    return m >= 0 ? coeffs_[a] : std::conj(coeffs_[a]);
}

bool CircleSeries::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](auto c) { return c == 0.0; });
}

double CircleSeries::value(double x2) const
{
    if (coeffs_.empty())
        return 0.0;
    double v = coeffs_[0].real();
    for (std::size_t m = 1; m < coeffs_.size(); ++m)
        v += 2.0 * (coeffs_[m] * std::polar(1.0, static_cast<double>(m) * x2)).real();
    return v;
}

std::vector<double> CircleSeries::sample(int n2, int derivative_order) const
{
    std::vector<double> out(n2, 0.0);
    for (int j = 0; j < n2; ++j) {
        const double x = 2.0 * std::numbers::pi * j / n2;
        double v = (derivative_order == 0 && !coeffs_.empty()) ? coeffs_[0].real() : 0.0;
        for (std::size_t m = 1; m < coeffs_.size(); ++m) {
            const std::complex<double> ik(0.0, static_cast<double>(m));
            v += 2.0 * (coeffs_[m] * std::pow(ik, derivative_order)
                        * std::polar(1.0, static_cast<double>(m) * x)).real();
        }
        out[j] = v;
    }
    return out;
}

double circle_norm(const CircleSeries& g, int s)
{
    double sum = std::norm(g.coefficient(0));
    for (int m = 1; m <= g.max_mode(); ++m)
        sum += 2.0 * std::pow(1.0 + double(m) * m, s) * std::norm(g.coefficient(m));
    return std::sqrt(2.0 * std::numbers::pi * sum);
}

void write_field_csv(std::ostream& os, const Field2D& f)
{
    os << "x1,x2,value\n";
    char buf[96];
    for (int i = 0; i < f.n1(); ++i)
        for (int j = 0; j < f.n2(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.x1(i), f.x2(j), f(i, j));
            os << buf;
        }
}

}  // namespace transonic
