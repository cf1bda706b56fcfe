#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "transonic/fd.hpp"
#include "transonic/field.hpp"
#include "transonic/spectral.hpp"

using namespace transonic;
using std::numbers::pi;

namespace {

std::vector<double> samples(int n, const std::function<double(double)>& f)
{
    std::vector<double> v(n);
    for (int j = 0; j < n; ++j)
        v[j] = f(2 * pi * j / n);
    return v;
}

}  // namespace

TEST_CASE("stencil weights agree with the moment conditions")
{
    const double dx = 0.125;
    for (int order : {1, 2, 3}) {
        for (int lo : {-3, -2, -1, 0}) {
            const int count = order + 2;
            const fd::Stencil s = fd::offset_stencil(order, 10, lo, count, dx);
            const auto w = oracle::moment_weights(order, oracle::range(lo, count), dx);
            CHECK(s.first == 10 + lo);
            for (int k = 0; k < count; ++k)
                CHECK(s.weights[k] == doctest::Approx(w[k]).epsilon(1e-10));
        }
    }
    const fd::Stencil b = fd::backward_stencil(2, 7, dx);
    const auto w = oracle::moment_weights(2, oracle::range(-3, 4), dx);
    CHECK(b.first == 4);
    for (int k = 0; k < 4; ++k)
        CHECK(b.weights[k] == doctest::Approx(w[k]).epsilon(1e-10));
}

TEST_CASE("node stencils are exact on quadratics at every node")
{
    const int n = 9;
    const double dx = 0.5;
    for (int order : {1, 2}) {
        for (int i = 0; i < n; ++i) {
            const fd::Stencil s = fd::node_stencil(order, i, n, dx);
            CHECK(s.first >= 0);
            CHECK(s.first + static_cast<int>(s.weights.size()) <= n);
            double d = 0.0;
            for (std::size_t k = 0; k < s.weights.size(); ++k) {
                const double x = (s.first + static_cast<int>(k)) * dx;
                d += s.weights[k] * (3 * x * x - x + 2);
            }
            const double x = i * dx;
            CHECK(d == doctest::Approx(order == 1 ? 6 * x - 1 : 6.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("spectral differentiation is exact for resolved modes")
{
    const int n = 16;
    const auto u = samples(n, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(7 * x); });
    std::vector<double> d(n), d2(n);
    spectral::differentiate(u, d, 1);
    spectral::differentiate(u, d2, 2);
    for (int j = 0; j < n; ++j) {
        const double x = 2 * pi * j / n;
        CHECK(d[j] == doctest::Approx(3 * std::cos(3 * x) - 3.5 * std::sin(7 * x)).epsilon(1e-12));
        CHECK(d2[j] == doctest::Approx(-9 * std::sin(3 * x) - 24.5 * std::cos(7 * x)).epsilon(1e-12));
    }
    // Odd derivatives drop the Nyquist mode.
    const auto nyq = samples(n, [](double x) { return std::cos(8 * x); });
    spectral::differentiate(nyq, d, 1);
    for (double v : d)
        CHECK(std::abs(v) < 1e-12);
    const Eigen::MatrixXd m = spectral::differentiation_matrix(n, 2);
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
    Eigen::Map<const Eigen::VectorXd> d2v(d2.data(), n);
    CHECK((m * uv - d2v).norm() < 1e-10);
}

TEST_CASE("dealiased product is exact when the product is resolved")
{
    const int n = 16;
    const auto c = samples(n, [](double x) { return 1.0 + std::cos(2 * x); });
    const auto u = samples(n, [](double x) { return std::sin(3 * x); });
    const auto p = spectral::dealiased_product(c, u);
    for (int j = 0; j < n; ++j)
        CHECK(p[j] == doctest::Approx(c[j] * u[j]).epsilon(1e-12));
    const Eigen::MatrixXd m = spectral::dealiased_product_matrix(c);
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
    const Eigen::VectorXd pm = m * uv;
    for (int j = 0; j < n; ++j)
        CHECK(pm[j] == doctest::Approx(p[j]).epsilon(1e-12));
}

TEST_CASE("mixed derivatives of a smooth field")
{
    auto fn = [](double x, double y) { return std::sin(x) * std::cos(2 * y); };
    double prev = 0.0;
    for (int n1 : {33, 65, 129}) {
        const Grid1D g = Grid1D::make(n1);
        const Field2D f = Field2D::from_function(g, 16, fn);
        const Field2D d12 = derivative(f, 1, 1);
        const Field2D d02 = derivative(f, 0, 2);
        double err = 0.0;
        for (int i = 0; i < f.n1(); ++i)
            for (int j = 0; j < 16; ++j) {
                const double x = f.x1(i), y = f.x2(j);
                err = std::max(err, std::abs(d12(i, j) + 2 * std::cos(x) * std::sin(2 * y)));
                CHECK(d02(i, j) == doctest::Approx(-4 * fn(x, y)).epsilon(1e-10));
            }
        if (prev > 0.0)
            CHECK(oracle::log2_ratio(prev, err) > 1.8);
        prev = err;
    }
}

TEST_CASE("norms")
{
    const Grid1D g = Grid1D::make(65);
    const Field2D one(g, 8, 1.0);
    CHECK(l2_norm(one) == doctest::Approx(std::sqrt(4 * pi)).epsilon(1e-12));
    CHECK(sobolev_norm(one, 3) == doctest::Approx(std::sqrt(4 * pi)).epsilon(1e-12));
    const Field2D c = Field2D::from_function(g, 16, [](double, double y) { return std::cos(y); });
    // ||u||_1^2 = ||u||^2 + ||d2 u||^2 = 2 (pi + pi)
    CHECK(sobolev_norm(c, 1) == doctest::Approx(std::sqrt(4 * pi)).epsilon(1e-12));
}

TEST_CASE("circle series norms and samples")
{
    const CircleSeries g = CircleSeries::from_cosine_modes({{1, 1.0}});
    CHECK(g.coefficient(1).real() == doctest::Approx(0.5));
    // Parseval: the integral of cos^2 over the circle is pi.
    CHECK(circle_norm(g, 0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    CHECK(circle_norm(g, 5) == doctest::Approx(std::sqrt(pi) * std::pow(2.0, 2.5)).epsilon(1e-14));
    const CircleSeries h = CircleSeries::from_cosine_modes({{0, 0.3}, {2, -0.2}, {5, 0.1}});
    const auto s = h.sample(32);
    double quad = 0.0;
    for (double v : s)
        quad += v * v;
    CHECK(circle_norm(h, 0) == doctest::Approx(std::sqrt(quad * 2 * pi / 32)).epsilon(1e-12));
    const CircleSeries back = CircleSeries::from_samples(s);
    for (int j = 0; j < 32; ++j)
        CHECK(back.value(2 * pi * j / 32) == doctest::Approx(s[j]).epsilon(1e-12));
    const auto ds = h.sample(32, 1);
    for (int j = 0; j < 32; ++j) {
        const double y = 2 * pi * j / 32;
        CHECK(ds[j] == doctest::Approx(0.4 * std::sin(2 * y) - 0.5 * std::sin(5 * y)).epsilon(1e-12));
    }
    CHECK(CircleSeries{}.is_zero());
}

TEST_CASE("field arithmetic, restriction and csv")
{
    const Grid1D g = Grid1D::make(33, 0.5);
    Field2D a(g, 8, 2.0);
    Field2D b(g, 8, 0.5);
    const Field2D c = a - 2.0 * b;
    CHECK(c.max_abs() == doctest::Approx(1.0));
    const Field2D r = c.restricted_to_physical();
    CHECK(r.n1() == 33);
    CHECK(r.padded_to(g).n1() == g.size());
    std::ostringstream os;
    write_field_csv(os, r);
    const std::string text = os.str();
    CHECK(text.rfind("x1,x2,value\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 33 * 8);
    CHECK_THROWS(Field2D(g, 12));
}
