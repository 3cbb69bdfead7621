// Independent reference computations used only by the tests.
#pragma once

#include <functional>
#include <vector>

namespace oracle {

// Exact discrete optimal transport between two weighted point sets with an
// arbitrary ground cost, by successive shortest paths on the bipartite
// network (Dijkstra with potentials). Total masses must agree.
double transport_cost(const std::vector<double>& a, const std::vector<double>& b,
                      const std::function<double(int, int)>& cost);

// Direct O(n^2) periodic convolution with an analytic kernel of the
// periodic distance: out_i = sum_j k(d(x_i, x_j)) f_j dx.
std::vector<double> convolve_direct(const std::vector<double>& f, double length,
                                    const std::function<double(double)>& kernel);

// Composite Simpson rule on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace oracle
