#include "transonic/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace transonic {

Grid1D Grid1D::make(int n1, double l_ext)
{
    if (n1 < 5 || n1 % 2 == 0)
        throw std::invalid_argument("n1 must be odd and at least 5");
    if (l_ext < 0.0)
        throw std::invalid_argument("negative extension length");
    Grid1D g;
    g.n1_ = n1;
    g.dx_ = 2.0 / (n1 - 1);
    g.n_ext_ = static_cast<int>(std::lround(l_ext / g.dx_));
    return g;
}

double Grid1D::node(int i) const
{
    if (i < n1_)
        return 2.0 * (i - throat_index()) / (n1_ - 1);
    return 1.0 + (i - n1_ + 1) * dx_;
}

std::vector<double> Grid1D::nodes() const
{
    std::vector<double> x(size());
    for (int i = 0; i < size(); ++i)
        x[i] = node(i);
    return x;
}

Grid1D Grid1D::physical() const
{
    Grid1D g = *this;
    g.n_ext_ = 0;
    return g;
}

}  // namespace transonic
