#include <doctest.h>

#include <cmath>

#include "rcsurf/ambient.hpp"
#include "rcsurf/errors.hpp"
#include "rcsurf/scene.hpp"
#include "support.hpp"

using namespace rcsurf;
using testkit::max_abs_diff;

namespace {

Ambient::Matrix matrix(const std::array<std::array<const char*, 3>, 3>& rows) {
    Ambient::Matrix m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = expr::parse(rows[i][j], Ambient::vars());
    return m;
}

Ambient cartan_schouten(double lambda) {
    Ambient::Matrix g = matrix({{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}});
    std::array<expr::Expr, 27> gamma;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                int eps = (i - j) * (j - k) * (k - i) / 2;
                gamma[static_cast<std::size_t>(gidx(k, i, j))] = lambda * eps;
            }
    return Ambient::from_coefficients(g, gamma);
}

// Upper half-space: g = I / z², Levi-Civita connection.
Ambient hyperbolic() {
    Ambient::Matrix g = matrix({{{"1/z^2", "0", "0"}, {"0", "1/z^2", "0"}, {"0", "0", "1/z^2"}}});
    std::array<expr::Expr, 27> gamma;
    expr::Expr zinv = expr::parse("1/z", Ambient::vars());
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double c = (i == k && j == 2) + (j == k && i == 2) - (i == j && k == 2);
                gamma[static_cast<std::size_t>(gidx(k, i, j))] = c == 0 ? expr::Expr(0.0) : -c * zinv;
            }
    ChartBox box;
    box.lo[2] = 0.0;
    return Ambient::from_coefficients(g, gamma, box);
}

Ambient twisted_frame() {
    return Ambient::from_frame(matrix({{{"cos(x*y)", "-sin(x*y)", "0"},
                                        {"sin(x*y)*cos(z)", "cos(x*y)*cos(z)", "-sin(z)"},
                                        {"sin(x*y)*sin(z)", "cos(x*y)*sin(z)", "cos(z) + 0.5"}}}));
}

}  // namespace

TEST_CASE("cartan-schouten tensors") {
    testkit::Rng rng(21);
    for (double lambda : {0.0, 0.3, 1.0}) {
        Ambient a = cartan_schouten(lambda);
        for (int t = 0; t < 20; ++t) {
            Vec3 p = rng.vec(2.0), X = rng.vec(), Y = rng.vec(), Z = rng.vec();
            AmbientTensors ts = curvature(a, p);
            CHECK(max_abs_diff(apply_torsion(ts.T, X, Y), 2 * lambda * cross(X, Y)) <= 1e-14);
            Vec3 want = lambda * lambda * (cross(X, cross(Y, Z)) - cross(Y, cross(X, Z)));
            CHECK(max_abs_diff(apply_curvature(ts.R, X, Y, Z), want) <= 1e-14);
            CHECK(max_abs_diff(ts.Ric, -2 * lambda * lambda * Mat3::identity()) <= 1e-14);
            CHECK(ts.scal == doctest::Approx(-6 * lambda * lambda).epsilon(1e-14));
            CHECK(sectional(ts, Mat3::identity(), X, Y) == doctest::Approx(-lambda * lambda).epsilon(1e-12));
            CHECK(metric_compat_residual(a, p) <= 1e-15);
            SufficientCondition sc = sufficient_condition_check(a, p, 1e-10);
            CHECK(sc.ricci_proportional);
            CHECK(sc.torsion_proportional);
            CHECK(sc.kappa == doctest::Approx(2 * lambda).epsilon(1e-14));
        }
    }
}

TEST_CASE("hyperbolic half-space") {
    Ambient a = hyperbolic();
    testkit::Rng rng(22);
    for (int t = 0; t < 50; ++t) {
        Vec3 p{rng.uniform(), rng.uniform(), rng.uniform(0.3, 2.0)};
        AmbientTensors ts = curvature(a, p);
        AmbientJet j = a.jet(p, 1);
        CHECK(metric_compat_residual(j) <= 1e-12);
        for (double x : ts.T) CHECK(x == 0.0);
        Vec3 X = rng.vec(), Y = rng.vec();
        CHECK(sectional(ts, j.g, X, Y) == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(max_abs_diff(ts.Ric, -2.0 * j.g) <= 1e-10 * max_abs(j.g));
        CHECK(ts.scal == doctest::Approx(-6.0).epsilon(1e-10));
        // Rlow antisymmetries and pair symmetry (torsion-free)
        for (int i = 0; i < 81; ++i) {
            int a0 = i / 27, b0 = i / 9 % 3, c0 = i / 3 % 3, d0 = i % 3;
            double r = ts.Rlow[static_cast<std::size_t>(i)];
            CHECK(r == doctest::Approx(-ts.Rlow[static_cast<std::size_t>(ridx(b0, a0, c0, d0))]).epsilon(1e-12));
            CHECK(r == doctest::Approx(-ts.Rlow[static_cast<std::size_t>(ridx(a0, b0, d0, c0))]).epsilon(1e-12));
            CHECK(r == doctest::Approx(ts.Rlow[static_cast<std::size_t>(ridx(c0, d0, a0, b0))]).epsilon(1e-12));
        }
        SufficientCondition sc = sufficient_condition_check(ts, j.g, 1e-9);
        CHECK(sc.ricci_proportional);
        CHECK(sc.kappa == 0.0);
    }
    CHECK_THROWS_AS(a.jet({0, 0, -1}), Error);
}

TEST_CASE("frame-defined ambients are flat and parallelize the frame") {
    Ambient a = twisted_frame();
    testkit::Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        Vec3 p = rng.vec();
        AmbientJet j = a.jet(p, 2);
        CHECK(max_abs_diff(transpose(j.F) * j.g * j.F, Mat3::identity()) <= 1e-12);
        AmbientTensors ts = tensors(j);
        for (double x : ts.R) CHECK(std::fabs(x) <= 1e-10);
        CHECK(metric_compat_residual(j) <= 1e-10);
        // ∇ E_i = 0 with ∂F from finite differences
        for (int c = 0; c < 3; ++c) {
            const double h = 1e-5;
            Vec3 q1 = p, q0 = p;
            q1[c] += h;
            q0[c] -= h;
            Mat3 dF = (0.5 / h) * (a.jet(q1).F - a.jet(q0).F);
            Mat3 Gc;
            for (int k = 0; k < 3; ++k)
                for (int b = 0; b < 3; ++b) Gc(k, b) = j.gamma[static_cast<std::size_t>(gidx(k, c, b))];
            CHECK(max_abs(dF + Gc * j.F) <= 1e-8);
        }
    }
}

TEST_CASE("ambient validation") {
    Ambient singular = Ambient::from_frame(matrix({{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "x"}}}));
    std::vector<Vec3> pts{{0.5, 0, 0}, {0, 0, 0}};
    try {
        singular.validate(pts);
        FAIL("expected SingularFrame");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SingularFrame);
    }
    std::vector<Vec3> ok{{0.5, 0, 0}, {1.0, 2.0, 0}};
    CHECK_NOTHROW(singular.validate(ok));

    Ambient::Matrix g = matrix({{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}});
    std::array<expr::Expr, 27> gamma;
    gamma[static_cast<std::size_t>(gidx(0, 0, 1))] = 1.0;
    Ambient broken = Ambient::from_coefficients(g, gamma);
    CHECK(metric_compat_residual(broken, {0, 0, 0}) == 1.0);
    try {
        broken.validate(ok);
        FAIL("expected MetricIncompatible");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MetricIncompatible);
    }

    CHECK_THROWS_AS(cartan_schouten(0.3).frame(), Error);
    CHECK(twisted_frame().frame_defined());
}

TEST_CASE("builtin cartan-schouten scene ambient matches the coefficient form") {
    Scene s = builtin("cartan_schouten_sphere", {{"lambda", "0.7"}});
    Ambient ref = cartan_schouten(0.7);
    testkit::Rng rng(24);
    for (int t = 0; t < 10; ++t) {
        Vec3 p = rng.vec();
        auto a = christoffel(*s.ambient, p), b = christoffel(ref, p);
        for (std::size_t i = 0; i < 27; ++i) CHECK(a[i] == b[i]);
    }
}
