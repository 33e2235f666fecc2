#include "rcsurf/extrinsic.hpp"

#include <cmath>

#include "rcsurf/errors.hpp"

namespace rcsurf {

Mat2 second_fundamental(const SurfaceSample& s) {
    Mat2 II;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) II(a, b) = s.dot(s.N, s.nabla_XX(a, b));
    return II;
}

ExtrinsicData extrinsic(const SurfaceSample& s) {
    ExtrinsicData d;
    d.II = second_fundamental(s);
    d.W = s.Ginv * transpose(d.II);
    d.W_on = inverse(s.P) * d.W * s.P;
    d.III = transpose(d.W) * s.G * d.W;
    d.K_e = det(d.W);
    d.H = trace(d.W);
    d.star_tau = d.W_on(1, 0) - d.W_on(0, 1);

    std::array<double, 27> T{};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) T[gidx(k, i, j)] = s.jet.gamma[gidx(k, i, j)] - s.jet.gamma[gidx(k, j, i)];
    d.star_tau_torsion = s.dot(s.N, apply_torsion(T, s.E1, s.E2));
    d.tau_uv = s.dot(s.N, apply_torsion(T, s.X[0], s.X[1]));
    d.bold_H = {d.H, d.star_tau};
    return d;
}

WeingartenResult weingarten(const Surface& surf, double u, double v) {
    SurfaceSample s = surf.sample(u, v);
    WeingartenResult r;
    r.W = extrinsic(s).W;

    auto normal_at = [&](double uu, double vv) {
        SurfaceSample t = surf.sample(uu, vv);
        return std::vector<double>{t.N[0], t.N[1], t.N[2]};
    };
    double normal_part = 0.0;
    for (int a = 0; a < 2; ++a) {
        auto dN = surf.derivative(a, u, v, normal_at);
        Vec3 cov = Vec3{dN[0], dN[1], dN[2]} + connection_term(s.jet.gamma, s.X[static_cast<std::size_t>(a)], s.N);
        Vec3 WX = -cov;
        auto c = s.tangent_coords(WX);
        r.W_from_normal(0, a) = c[0];
        r.W_from_normal(1, a) = c[1];
        normal_part = std::max(normal_part, std::fabs(s.dot(WX, s.N)));
    }
    r.cross_check_residual = max_abs(r.W - r.W_from_normal) + normal_part;
    return r;
}

double gauss_equation_residual(const SurfaceSample& s, const AmbientTensors& t, const SurfaceCurvature& sc) {
    Mat2 II = second_fundamental(s);
    double lhs = apply_lowered(t.Rlow, s.X[0], s.X[1], s.X[1], s.X[0]);
    double rhs = sc.R_uvvu - II(0, 0) * II(1, 1) + II(0, 1) * II(1, 0);
    return std::fabs(lhs - rhs);
}

double gauss_equation_residual(const Surface& surf, double u, double v) {
    SurfaceSample s = surf.sample(u, v);
    return gauss_equation_residual(s, tensors(surf.ambient().jet(s.p, 2)), surface_curvature(surf, u, v));
}

CurvatureDecomposition curvature_decomposition(const SurfaceSample& s, const ExtrinsicData& d,
                                               const AmbientTensors& t, double K_intrinsic) {
    CurvatureDecomposition out;
    out.K_e = d.K_e;
    out.K_intrinsic = K_intrinsic;
    out.ambient_sectional = sectional(t, s.jet.g, s.X[0], s.X[1]);
    out.sectional_split = std::fabs(out.ambient_sectional - (out.K_intrinsic - out.K_e));
    double rmax = 0.0;
    for (double x : t.R) rmax = std::max(rmax, std::fabs(x));
    if (rmax <= 1e-9) out.egregium = std::fabs(out.K_e - out.K_intrinsic);
    return out;
}

CurvatureDecomposition curvature_decomposition_residual(const Surface& surf, double u, double v) {
    SurfaceSample s = surf.sample(u, v);
    return curvature_decomposition(s, extrinsic(s), tensors(surf.ambient().jet(s.p, 2)),
                                   intrinsic_curvature(surf, u, v));
}

Classification classify(const ExtrinsicData& d, double tol) {
    Classification c;
    Mat2 umb{{0.5 * d.H, -0.5 * d.star_tau, 0.5 * d.star_tau, 0.5 * d.H}};
    c.umbilic = max_abs(d.W_on - umb) <= tol;
    c.minimal_point = std::abs(d.bold_H) <= tol;
    c.geodesic_point = max_abs(d.II) <= tol;
    return c;
}

}  // namespace rcsurf
