#include "rcsurf/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "rcsurf/errors.hpp"

namespace rcsurf {

AxisRule gauss_legendre(int m) {
    if (m < 1) throw Error(Errc::ConfigError, "Gauss-Legendre order must be positive");
    AxisRule r;
    r.nodes.resize(static_cast<std::size_t>(m));
    r.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= m; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(m - 1 - i);
        r.nodes[lo] = -x;
        r.nodes[hi] = x;
        r.weights[lo] = w;
        r.weights[hi] = w;
    }
    if (m % 2 == 1) r.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
    return r;
}

AxisRule uniform_axis(double lo, double hi, int n, bool periodic) {
    if (n < 1) throw Error(Errc::ConfigError, "grid resolution must be positive");
    AxisRule r;
    double h = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(periodic ? lo + i * h : lo + (i + 0.5) * h);
        r.weights.push_back(h);
    }
    return r;
}

AxisRule quadrature_axis(double lo, double hi, int n, bool periodic) {
    if (periodic) return uniform_axis(lo, hi, n, true);
    if (n < 1) throw Error(Errc::ConfigError, "grid resolution must be positive");
    int m = 1;
    for (int d = 1; d <= 16; ++d)
        if (n % d == 0) m = d;
    int panels = n / m;
    AxisRule gl = gauss_legendre(m);
    AxisRule r;
    double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = lo + (p + 0.5) * width;
        for (int k = 0; k < m; ++k) {
            r.nodes.push_back(mid + 0.5 * width * gl.nodes[static_cast<std::size_t>(k)]);
            r.weights.push_back(0.5 * width * gl.weights[static_cast<std::size_t>(k)]);
        }
    }
    return r;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace rcsurf
