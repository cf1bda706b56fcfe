#pragma once

#include <span>
#include <vector>

namespace transonic::fd {

// Finite-difference weights for the derivative of the given order at x0
// from samples at xs (Fornberg's recursion).
std::vector<double> fornberg_weights(double x0, std::span<const double> xs, int order);

// Weights applied to nodes first, first+1, ...
struct Stencil {
    int first = 0;
    std::vector<double> weights;
};

// Second-order stencil at node i of a uniform grid with n nodes: central
// when it fits, one-sided of width order+2 otherwise.
Stencil node_stencil(int order, int i, int n, double dx);

// Second-order upwind stencil on nodes i-order-1 .. i (orders 1 and 2).
Stencil backward_stencil(int order, int i, double dx);

// Weights on uniform offsets lo..lo+count-1 (in units of dx).
Stencil offset_stencil(int order, int i, int lo, int count, double dx);

}  // namespace transonic::fd
