#pragma once

#include <vector>

namespace rcsurf {

struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
AxisRule gauss_legendre(int m);

/// Sampling lattice: periodic axes lo + i L / n, others cell-centred
/// lo + (i + ½) L / n. Weights are the uniform L / n.
AxisRule uniform_axis(double lo, double hi, int n, bool periodic);

/// Integration rule with n nodes: trapezoid on periodic axes, composite
/// Gauss-Legendre otherwise (panels of the largest divisor of n up to 16).
AxisRule quadrature_axis(double lo, double hi, int n, bool periodic);

/// Fixed-order pairwise sum.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace rcsurf
