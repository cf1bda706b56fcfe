#include "transonic/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace transonic::spectral {

namespace {

using cvec = std::vector<std::complex<double>>;

Eigen::FFT<double>& engine()
{
    thread_local Eigen::FFT<double> fft;
    return fft;
}

// Move n-point spectrum onto an m-point one (m > n), splitting the Nyquist bin.
cvec pad(const cvec& s, int m)
{
    const int n = static_cast<int>(s.size());
    cvec out(m, 0.0);
    for (int q = 0; q < n; ++q) {
        if (2 * q == n) {
            out[n / 2] += 0.5 * s[q];
            out[m - n / 2] += 0.5 * s[q];
            continue;
        }
        const int k = wavenumber(q, n);
        out[k >= 0 ? k : m + k] += s[q];
    }
    return out;
}

cvec truncate(const cvec& s, int n)
{
    const int m = static_cast<int>(s.size());
    cvec out(n, 0.0);
    for (int q = 0; q < n; ++q) {
        if (2 * q == n) {
            out[q] = s[n / 2] + s[m - n / 2];
            continue;
        }
        const int k = wavenumber(q, n);
        out[q] = s[k >= 0 ? k : m + k];
    }
    return out;
}

}  // namespace

int wavenumber(int q, int n)
{
    return 2 * q <= n ? q : q - n;
}

cvec forward(std::span<const double> samples)
{
    std::vector<double> in(samples.begin(), samples.end());
    cvec out;
    engine().fwd(out, in);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto& c : out)
        c *= scale;
    return out;
}

std::vector<double> inverse(const cvec& spectrum)
{
    cvec s = spectrum;
    const double n = static_cast<double>(s.size());
    for (auto& c : s)
        c *= n;
    std::vector<double> out;
    engine().inv(out, s);
    return out;
}

void differentiate(std::span<const double> in, std::span<double> out, int order)
{
    const int n = static_cast<int>(in.size());
    if (order == 0) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    cvec s = forward(in);
    for (int q = 0; q < n; ++q) {
        if (2 * q == n && order % 2 == 1) {
            s[q] = 0.0;
            continue;
        }
        const std::complex<double> ik(0.0, static_cast<double>(wavenumber(q, n)));
        s[q] *= std::pow(ik, order);
    }
    const std::vector<double> r = inverse(s);
    std::copy(r.begin(), r.end(), out.begin());
}

Eigen::MatrixXd differentiation_matrix(int n, int order)
{
    Eigen::MatrixXd d(n, n);
    std::vector<double> e(n, 0.0), col(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        differentiate(e, col, order);
        for (int i = 0; i < n; ++i)
            d(i, j) = col[i];
        e[j] = 0.0;
    }
    return d;
}

std::vector<double> dealiased_product(std::span<const double> c, std::span<const double> u)
{
    const int n = static_cast<int>(c.size());
    if (static_cast<int>(u.size()) != n || n % 2 != 0)
        throw std::invalid_argument("dealiased product needs equal even lengths");
    const int m = 3 * n / 2;
    const std::vector<double> cp = inverse(pad(forward(c), m));
    const std::vector<double> up = inverse(pad(forward(u), m));
    std::vector<double> prod(m);
    for (int i = 0; i < m; ++i)
        prod[i] = cp[i] * up[i];
    return inverse(truncate(forward(prod), n));
}

Eigen::MatrixXd dealiased_product_matrix(std::span<const double> c)
{
    const int n = static_cast<int>(c.size());
    Eigen::MatrixXd p(n, n);
    std::vector<double> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = dealiased_product(c, e);
        for (int i = 0; i < n; ++i)
            p(i, j) = col[i];
        e[j] = 0.0;
    }
    return p;
}

}  // namespace transonic::spectral
