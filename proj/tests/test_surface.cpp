#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rcsurf/errors.hpp"
#include "rcsurf/scene.hpp"
#include "rcsurf/surface.hpp"
#include "support.hpp"

using namespace rcsurf;
using testkit::max_abs_diff;

namespace {

std::shared_ptr<const Ambient> euclidean() {
    Ambient::Matrix F;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F[i][j] = i == j ? 1.0 : 0.0;
    return std::make_shared<Ambient>(Ambient::from_frame(F));
}

Surface make(std::shared_ptr<const Ambient> a, std::array<const char*, 3> X, Domain d, bool iso = false) {
    std::array<expr::Expr, 3> e;
    for (int i = 0; i < 3; ++i) e[i] = expr::parse(X[i], Surface::vars());
    return Surface(std::move(a), e, d, iso);
}

Domain sphere_domain() {
    Domain d;
    d.lo = {0.0, 0.0};
    d.hi = {std::numbers::pi, 2 * std::numbers::pi};
    d.periodic = {false, true};
    return d;
}

}  // namespace

TEST_CASE("round sphere first fundamental form and surface connection") {
    Surface s = make(euclidean(), {"sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"}, sphere_domain());
    testkit::Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        double u = rng.uniform(0.2, 2.9), v = rng.uniform(0, 6.2);
        SurfaceSample sm = s.sample(u, v);
        CHECK(sm.G(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::fabs(sm.G(0, 1)) <= 1e-15);
        CHECK(sm.G(1, 1) == doctest::Approx(std::sin(u) * std::sin(u)).epsilon(1e-14));
        CHECK(sm.area == doctest::Approx(std::sin(u)).epsilon(1e-14));

        // Euclidean oracle: Γ^c_ab = G^{cd} (X_ab · X_d) with X_ab by finite differences
        const double h = 1e-5;
        auto X = [&](double uu, double vv) {
            SurfaceSample q = s.sample(uu, vv);
            return std::array<Vec3, 2>{q.X[0], q.X[1]};
        };
        std::array<std::array<Vec3, 2>, 2> XX;
        auto xu1 = X(u + h, v), xu0 = X(u - h, v), xv1 = X(u, v + h), xv0 = X(u, v - h);
        for (int b = 0; b < 2; ++b) {
            XX[0][b] = (0.5 / h) * (xu1[b] - xu0[b]);
            XX[1][b] = (0.5 / h) * (xv1[b] - xv0[b]);
        }
        for (int c = 0; c < 2; ++c)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double want = 0.0;
                    for (int d = 0; d < 2; ++d) want += sm.Ginv(c, d) * dot(XX[a][b], sm.X[d]);
                    CHECK(sm.gS(c, a, b) == doctest::Approx(want).epsilon(1e-8).scale(1.0));
                }
        CHECK(sm.gS(0, 1, 1) == doctest::Approx(-std::sin(u) * std::cos(u)).epsilon(1e-13).scale(1.0));
        CHECK(sm.gS(1, 0, 1) == doctest::Approx(std::cos(u) / std::sin(u)).epsilon(1e-13).scale(1.0));

        CHECK(max_abs_diff(sm.N, sm.p) <= 1e-14);
        CHECK(dot(sm.E1, sm.E2) == doctest::Approx(0.0).scale(1.0));
        CHECK(intrinsic_curvature(s, u, v) == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(s.sample(-0.1, 1.0), Error);
    CHECK_NOTHROW(s.sample(1.0, 7.0));
}

TEST_CASE("stencil steps") {
    Surface s = make(euclidean(), {"u", "v", "0"}, Domain{{0, 0}, {2, 1}, {false, true}});
    int off = 7;
    CHECK(s.stencil_step(0, 1.0, false, &off) == doctest::Approx(2e-3));
    CHECK(off == 0);
    CHECK(s.stencil_step(0, 0.1, false, &off) == doctest::Approx(1e-3));
    CHECK(s.stencil_step(0, 1.9, false, &off) == doctest::Approx(1e-3));
    CHECK(s.stencil_step(1, 0.0, false, &off) == doctest::Approx(1e-3));
    CHECK(s.stencil_step(0, 3e-4, false, &off) == doctest::Approx(3e-6));
    try {
        s.stencil_step(0, 3e-4, true, &off);
        s.stencil_step(0, 1e-5, false, &off);
        FAIL("expected StencilOutsideDomain");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::StencilOutsideDomain);
    }
    CHECK(s.stencil_step(0, 1e-5, true, &off) == doctest::Approx(2e-3));
    CHECK(off == 1);
    s.stencil_step(0, 2.0, true, &off);
    CHECK(off == -1);

    auto f = [](double u, double v) { return std::vector<double>{std::sin(3 * u) * v, std::exp(u)}; };
    for (double u : {1.0, 0.01, 1e-5, 1.99999}) {
        auto d = s.derivative(0, u, 0.5, f, true);
        CHECK(d[0] == doctest::Approx(1.5 * std::cos(3 * u)).epsilon(1e-8).scale(1.0));
        CHECK(d[1] == doctest::Approx(std::exp(u)).epsilon(1e-8));
    }
}

TEST_CASE("isothermal charts") {
    Surface sphere = make(euclidean(), {"sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"}, sphere_domain());
    try {
        isothermal_factor(sphere, 1.0, 0.5, 1e-9);
        FAIL("expected NotIsothermal");
    } catch (const NotIsothermal& e) {
        CHECK(e.E() == doctest::Approx(1.0));
        CHECK(e.F() == doctest::Approx(0.0).scale(1.0));
        CHECK(e.G() == doctest::Approx(std::sin(1.0) * std::sin(1.0)));
    }
    // Mercator chart of the sphere is conformal with λ = sech v
    Domain d{{0, -2}, {2 * std::numbers::pi, 2}, {true, false}};
    Surface merc = make(euclidean(), {"sech(v)*cos(u)", "sech(v)*sin(u)", "tanh(v)"}, d, true);
    for (double v : {-1.5, 0.0, 0.7})
        CHECK(isothermal_factor(merc, 0.3, v, 1e-9) == doctest::Approx(1.0 / std::cosh(v)).epsilon(1e-14));

    Scene cat = builtin("catenoid_frame_plane");
    SurfaceSample sm = cat.surface->sample(1.0, 0.5);
    CHECK(isothermal_factor(sm, 1e-9) * isothermal_factor(sm, 1e-9) == doctest::Approx(sm.area).epsilon(1e-14));
}

TEST_CASE("degenerate parameterizations") {
    Surface line = make(euclidean(), {"u + v", "u + v", "0"}, Domain{});
    try {
        line.sample(0.5, 0.5);
        FAIL("expected DegenerateParameterization");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateParameterization);
    }
}

TEST_CASE("surface torsion is the tangential part of ambient torsion") {
    Scene rot = builtin("rotated_frame_plane");
    Scene cs = builtin("cartan_schouten_sphere");
    testkit::Rng rng(32);
    for (int t = 0; t < 30; ++t) {
        SurfaceSample s = rot.surface->sample(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
        auto T = torsion(rot.surface->ambient(), s.p);
        Vec3 full = apply_torsion(T, s.X[0], s.X[1]);
        Vec3 tang = full - s.dot(full, s.N) * s.N;
        CHECK(max_abs_diff(surface_torsion(s), tang) <= 1e-12);

        // in the Cartan-Schouten ambient T(X,Y) is normal to every plane
        SurfaceSample q = cs.surface->sample(rng.uniform(0.2, 2.9), rng.uniform(0, 6));
        CHECK(max_abs(surface_torsion(q)) <= 1e-14);
    }
}
