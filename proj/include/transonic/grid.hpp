#pragma once

#include <vector>

namespace transonic {

// Uniform x1 grid on [-1, 1] with n1 (odd) nodes, optionally continued by n_ext
// nodes on (1, 1 + l_ext] with the same spacing.
class Grid1D {
public:
    Grid1D() = default;
    static Grid1D make(int n1, double l_ext = 0.0);

    int n1() const { return n1_; }
    int n_ext() const { return n_ext_; }
    int size() const { return n1_ + n_ext_; }
    double dx() const { return dx_; }
    double l_ext() const { return n_ext_ * dx_; }
    double node(int i) const;
    int throat_index() const { return (n1_ - 1) / 2; }
    int exit_index() const { return n1_ - 1; }
    std::vector<double> nodes() const;

    // Same spacing without the extension.
    Grid1D physical() const;
    Grid1D with_extension(double l_ext) const { return make(n1_, l_ext); }

    bool operator==(const Grid1D&) const = default;

private:
    int n1_ = 0;
    int n_ext_ = 0;
    double dx_ = 0.0;
};

}  // namespace transonic
