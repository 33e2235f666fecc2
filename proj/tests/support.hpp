#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "rcsurf/so3.hpp"

namespace testkit {

using rcsurf::Mat3;
using rcsurf::Vec3;

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) {
        return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
    }
    Vec3 vec(double scale = 1.0) {
        double x = uniform(), y = uniform(), z = uniform();
        return scale * Vec3{x, y, z};
    }
    Vec3 unit() {
        for (;;) {
            Vec3 a = vec();
            double n = rcsurf::norm(a);
            if (n > 0.1 && n <= 1.0) return a / n;
        }
    }
    Mat3 mat() {
        Mat3 m;
        for (double& x : m.a) x = uniform();
        return m;
    }
    /// Symmetric positive definite, condition number bounded by ~10.
    Mat3 spd() {
        Mat3 b = mat();
        Mat3 g = rcsurf::transpose(b) * b;
        for (int i = 0; i < 3; ++i) g(i, i) += 0.3;
        return g;
    }
    /// Text of a smooth function of x, y, z with random coefficients.
    std::string smooth(const char* a = "x", const char* b = "y", const char* c = "z") {
        char buf[256];
        double c0 = uniform(), c1 = uniform(), c2 = uniform(), c3 = uniform(), c4 = uniform(0.5, 1.5),
               c5 = uniform(0.5, 1.5), c6 = uniform();
        std::snprintf(buf, sizeof buf, "(%.17g) + (%.17g)*sin((%.17g)*%s + (%.17g)) + (%.17g)*cos((%.17g)*%s) + (%.17g)*%s*%s",
                      c0, c1, c4, a, c2, c3, c5, b, c6, a, c);
        return buf;
    }
};

inline double max_abs_diff(const Mat3& a, const Mat3& b) { return rcsurf::max_abs(a - b); }
inline double max_abs_diff(const Vec3& a, const Vec3& b) { return rcsurf::max_abs(a - b); }

}  // namespace testkit
