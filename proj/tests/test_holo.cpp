#include <doctest.h>

#include <cmath>

#include "rcsurf/errors.hpp"
#include "rcsurf/grid.hpp"
#include "rcsurf/holo.hpp"
#include "rcsurf/scene.hpp"
#include "support.hpp"

using namespace rcsurf;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

ComplexGrid lattice(int n, double h, const std::function<cplx(double, double)>& f, bool periodic = false) {
    ComplexGrid g;
    g.nu = g.nv = n;
    g.du = g.dv = h;
    g.periodic_u = g.periodic_v = periodic;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.values.push_back(f(i * h, j * h));
    return g;
}

}  // namespace

TEST_CASE("cauchy-riemann residual") {
    ComplexGrid zbar = lattice(12, 0.1, [](double x, double y) { return cplx(x, -y); });
    ComplexGrid z2 = lattice(12, 0.1, [](double x, double y) { return cplx(x, y) * cplx(x, y); });
    ComplexGrid c = lattice(12, 0.1, [](double, double) { return cplx(2, 3); });
    CHECK(std::abs(dzbar(zbar, 5, 5) - cplx(1, 0)) <= 1e-12);
    CHECK(std::abs(dzbar(z2, 5, 5)) <= 1e-12);
    auto r = cr_residual(c);
    CHECK(std::isnan(r[0]));
    CHECK(r[5 * 12 + 5] == 0.0);
    CHECK_THROWS_AS(dzbar(c, 1, 5), Error);
    // ∂z̄ |z|² = z
    ComplexGrid m = lattice(12, 0.1, [](double x, double y) { return cplx(x * x + y * y, 0); });
    CHECK(std::abs(dzbar(m, 4, 7) - cplx(0.4, 0.7)) <= 1e-12);
}

TEST_CASE("hopf differential of the rotated frame plane") {
    // θ = xy, e = (−1, 0, 0): 𝑯 = x + iy and φ = −(x + iy)/4
    Scene sc = builtin("rotated_frame_plane");
    testkit::Rng rng(61);
    for (int t = 0; t < 50; ++t) {
        double x = rng.uniform(-0.9, 0.9), y = rng.uniform(-0.9, 0.9);
        SurfaceSample s = sc.surface->sample(x, y);
        CHECK(std::abs(phi_coeff(s) - 0.25 * cplx(-x, -y)) <= 1e-12);
        PsiResult pr = psi_coeff(s);
        CHECK(std::abs(pr.psi - cplx(x, y) * 0.25 * cplx(-x, -y)) <= 1e-12);
        CHECK(pr.identity_residual <= 1e-12);
        CHECK(std::abs(bold_h_isothermal(s) - cplx(x, y)) <= 1e-12);
        CHECK(max_abs(l_tensor(*sc.surface, x, y)) <= 1e-12);
    }
}

TEST_CASE("hopf identity with a non-harmonic angle") {
    // θ = x², e = (0, 0.6, 0.8): φ = 0.3x, 𝑯 = 1.2x, both sides equal 0.15
    Scene sc = builtin("rotated_frame_plane", {{"theta", "x^2"}, {"e1", "0"}, {"e2", "0.6"}, {"e3", "0.8"}});
    GridOptions opt;
    opt.nu = opt.nv = 16;
    SampleGrid g = SampleGrid::build(sc, opt);
    ComplexGrid phi = g.complex_field([](const SampleRecord& r) { return r.phi; });
    ComplexGrid H = g.complex_field([](const SampleRecord& r) { return r.d.bold_H; });
    for (int i = 2; i < 14; i += 3)
        for (int j = 2; j < 14; j += 4) {
            const SampleRecord& r = g.at(i, j);
            CHECK(std::abs(r.phi - cplx(0.3 * r.u, 0)) <= 1e-12);
            HopfTerms h = hopf_identity(*sc.surface, phi, H, r.u, r.v, i, j);
            CHECK(std::abs(h.lhs - 0.15) <= 1e-10);
            CHECK(std::abs(h.rhs - 0.15) <= 1e-10);
            CHECK(h.residual <= 1e-10);
        }
}

TEST_CASE("catenoid frame plane") {
    Scene sc = builtin("catenoid_frame_plane");
    testkit::Rng rng(62);
    for (int t = 0; t < 30; ++t) {
        double u = rng.uniform(0, 6.28), v = rng.uniform(-1.9, 1.9);
        SurfaceSample s = sc.surface->sample(u, v);
        CHECK(std::abs(phi_coeff(s) - cplx(-0.5 * sech(v), 0)) <= 1e-12);
        CHECK(std::abs(psi_coeff(s).psi) <= 1e-12);
        // flat ambient, λ = 1 and W trace-free symmetric: L = −W T_S(Ē1, Ē2)
        ExtrinsicData d = extrinsic(s);
        auto y = s.tangent_coords(surface_torsion(s));
        Vec3 want = -1.0 * s.tangent(d.W(0, 0) * y[0] + d.W(0, 1) * y[1], d.W(1, 0) * y[0] + d.W(1, 1) * y[1]);
        CHECK(max_abs(l_tensor(*sc.surface, u, v) - want) <= 1e-12);
    }
}

TEST_CASE("L tensor") {
    // Cartan-Schouten: R(X,Y)N is parallel to (X×Y)×N = 0 and T_S = 0
    Scene cs = builtin("cartan_schouten_sphere", {{"lambda", "0.8"}});
    Scene plane = builtin("euclidean_plane");
    CHECK(max_abs(l_tensor(*cs.surface, 1.0, 2.0)) <= 1e-12);

    // torsion scale varying in x: metric compatible but not of the sufficient form
    SceneSpec spec = builtin_spec("cartan_schouten_sphere");
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                int eps = (i - j) * (j - k) * (k - i) / 2;
                spec.connection[k][i][j] = eps == 0 ? "0" : (eps > 0 ? "(0.3 + 0.5*x)" : "-(0.3 + 0.5*x)");
            }
    spec.goldens.clear();
    Scene warped = build_scene(spec);
    CHECK(max_abs(l_tensor(*warped.surface, 1.2, 0.4)) > 1e-3);

    // isothermal path needs an isothermal chart
    CHECK_THROWS_AS(phi_coeff(cs.surface->sample(1.0, 1.0)), NotIsothermal);
    CHECK_NOTHROW(phi_coeff(plane.surface->sample(0.5, 0.5)));
}

TEST_CASE("complex coefficient of a quadratic form") {
    Mat2 f{{3, 1, 1, -1}};
    CHECK(std::abs(quad_coeff(f) - cplx(1.0, -0.5)) <= 1e-15);
}
