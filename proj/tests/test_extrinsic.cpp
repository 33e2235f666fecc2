#include <doctest.h>

#include <cmath>

#include "rcsurf/extrinsic.hpp"
#include "rcsurf/scene.hpp"
#include "support.hpp"

using namespace rcsurf;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

void check_mat(const Mat2& m, std::array<double, 4> want, double tol) {
    for (std::size_t i = 0; i < 4; ++i) CHECK(m.a[i] == doctest::Approx(want[i]).epsilon(tol).scale(1.0));
}

}  // namespace

TEST_CASE("catenoid frames") {
    testkit::Rng rng(41);
    for (const char* name : {"catenoid_frame_plane", "catenoid_frame_cylinder"}) {
        Scene sc = builtin(name);
        for (int t = 0; t < 50; ++t) {
            double u = rng.uniform(0, 6.28), v = rng.uniform(-1.9, 1.9);
            ExtrinsicData d = extrinsic(sc.surface->sample(u, v));
            check_mat(d.W, {-sech(v), 0, 0, sech(v)}, 1e-12);
            check_mat(d.W_on, {-sech(v), 0, 0, sech(v)}, 1e-12);
            CHECK(std::abs(d.bold_H) <= 1e-12);
            CHECK(d.K_e == doctest::Approx(-sech(v) * sech(v)).epsilon(1e-12));
            CHECK(d.star_tau_torsion == doctest::Approx(d.star_tau).epsilon(1e-12).scale(1.0));
            Classification c = classify(d);
            CHECK(c.minimal_point);
            CHECK_FALSE(c.umbilic);
            CHECK_FALSE(c.geodesic_point);
        }
    }
}

TEST_CASE("cartan-schouten sphere") {
    testkit::Rng rng(42);
    for (double lambda : {0.0, 0.3, 1.0}) {
        Scene sc = builtin("cartan_schouten_sphere", {{"lambda", std::to_string(lambda)}});
        for (int t = 0; t < 30; ++t) {
            double u = rng.uniform(0.05, 3.09), v = rng.uniform(0, 6.28);
            SurfaceSample s = sc.surface->sample(u, v);
            ExtrinsicData d = extrinsic(s);
            check_mat(d.W_on, {-1, -lambda, lambda, -1}, 1e-12);
            CHECK(d.H == doctest::Approx(-2.0).epsilon(1e-12));
            CHECK(d.star_tau == doctest::Approx(2 * lambda).epsilon(1e-12).scale(1.0));
            CHECK(d.star_tau_torsion == doctest::Approx(2 * lambda).epsilon(1e-12).scale(1.0));
            CHECK(d.K_e == doctest::Approx(1 + lambda * lambda).epsilon(1e-12));
            Classification c = classify(d);
            CHECK(c.umbilic);
            CHECK(c.minimal_point == false);
            CurvatureDecomposition cd = curvature_decomposition_residual(*sc.surface, u, v);
            CHECK(cd.ambient_sectional == doctest::Approx(-lambda * lambda).epsilon(1e-12).scale(1.0));
            CHECK(cd.sectional_split <= 1e-4);
            CHECK(cd.K_intrinsic == doctest::Approx(1.0).epsilon(1e-5));
            CHECK(cd.egregium.has_value() == (lambda == 0.0));
            CHECK(gauss_equation_residual(*sc.surface, u, v) <= 1e-5);
        }
    }
}

TEST_CASE("standard torus in euclidean space") {
    Scene sc = builtin("torus_standard");
    const double R = 2, r = 1;
    testkit::Rng rng(43);
    for (int t = 0; t < 50; ++t) {
        double u = rng.uniform(0, 6.28), v = rng.uniform(0, 6.28);
        ExtrinsicData d = extrinsic(sc.surface->sample(u, v));
        double k1 = 1 / r, k2 = std::cos(v) / (R + r * std::cos(v));
        CHECK(d.K_e == doctest::Approx(k1 * k2).epsilon(1e-12).scale(1.0));
        CHECK(std::fabs(d.H) == doctest::Approx(k1 + k2).epsilon(1e-12));
        CHECK(std::fabs(d.star_tau) <= 1e-13);
        CHECK(std::fabs(d.W_on(0, 1) - d.W_on(1, 0)) <= 1e-13);
        CurvatureDecomposition cd = curvature_decomposition_residual(*sc.surface, u, v);
        REQUIRE(cd.egregium.has_value());
        CHECK(*cd.egregium <= 1e-6);
    }
}

TEST_CASE("rotated frame plane") {
    // θ = xy about the first frame axis with sign -1; plane z = 0
    Scene sc = builtin("rotated_frame_plane");
    testkit::Rng rng(44);
    for (int t = 0; t < 50; ++t) {
        double x = rng.uniform(-0.9, 0.9), y = rng.uniform(-0.9, 0.9);
        ExtrinsicData d = extrinsic(sc.surface->sample(x, y));
        double tx = y, ty = x;   // ∂θ/∂x, ∂θ/∂y
        CHECK(d.H == doctest::Approx(ty).epsilon(1e-12).scale(1.0));
        CHECK(d.star_tau == doctest::Approx(tx).epsilon(1e-12).scale(1.0));
        check_mat(d.W_on, {0, 0, tx, ty}, 1e-12);
    }
}

TEST_CASE("weingarten and gauss equation on every builtin") {
    testkit::Rng rng(45);
    for (const auto& b : list_builtins()) {
        Scene sc = builtin(b.name);
        const Domain& dom = sc.surface->domain();
        for (int t = 0; t < 20; ++t) {
            double u = dom.lo[0] + rng.uniform(0.05, 0.95) * dom.extent(0);
            double v = dom.lo[1] + rng.uniform(0.05, 0.95) * dom.extent(1);
            CAPTURE(b.name);
            WeingartenResult w = weingarten(*sc.surface, u, v);
            CHECK(w.cross_check_residual <= 1e-7);
            CHECK(gauss_equation_residual(*sc.surface, u, v) <= 1e-5);
            SurfaceSample s = sc.surface->sample(u, v);
            Mat2 II = second_fundamental(s);
            // W = G⁻¹ IIᵀ
            Mat2 want = s.Ginv * transpose(II);
            CHECK(max_abs(w.W - want) <= 1e-12 * (1 + max_abs(want)));
        }
    }
}

TEST_CASE("classification thresholds") {
    ExtrinsicData d;
    d.W_on = Mat2{{-1, -0.3, 0.3, -1 + 5e-8}};
    d.H = -2 + 5e-8;
    d.star_tau = 0.6;
    d.bold_H = {d.H, d.star_tau};
    d.II = Mat2{{1, 0, 0, 1}};
    CHECK(classify(d, 1e-7).umbilic);
    CHECK_FALSE(classify(d, 1e-8).umbilic);
    d = ExtrinsicData{};
    CHECK(classify(d).geodesic_point);
    CHECK(classify(d).minimal_point);
    CHECK(classify(d).umbilic);
}
