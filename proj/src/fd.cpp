#include "transonic/fd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace transonic::fd {

std::vector<double> fornberg_weights(double x0, std::span<const double> xs, int order)
{
    const int n = static_cast<int>(xs.size());
    if (order < 0 || n <= order)
        throw std::invalid_argument("stencil too small for derivative order");
    // c[j][k]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j)
        w[j] = c[j][order];
    return w;
}

Stencil offset_stencil(int order, int i, int lo, int count, double dx)
{
    std::vector<double> xs(count);
    for (int k = 0; k < count; ++k)
        xs[k] = lo + k;
    Stencil s;
    s.first = i + lo;
    s.weights = fornberg_weights(0.0, xs, order);
    const double scale = std::pow(dx, -order);
    for (double& w : s.weights)
        w *= scale;
    return s;
}

Stencil node_stencil(int order, int i, int n, double dx)
{
    if (order == 0)
        return Stencil{i, {1.0}};
    const int half = (order + 1) / 2;  // 1 for orders 1-2, 2 for orders 3-4
    const int width = order + 2;       // one-sided, second order
    if (n < width)
        throw std::invalid_argument("grid too small for stencil");
    if (i - half >= 0 && i + half < n)
        return offset_stencil(order, i, -half, 2 * half + 1, dx);
    if (i - half < 0)
        return offset_stencil(order, i, -i, width, dx);
    return offset_stencil(order, i, (n - 1 - i) - width + 1, width, dx);
}

Stencil backward_stencil(int order, int i, double dx)
{
    return offset_stencil(order, i, -(order + 1), order + 2, dx);
}

}  // namespace transonic::fd
