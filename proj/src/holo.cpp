#include "rcsurf/holo.hpp"

#include <cmath>
#include <limits>

#include "rcsurf/errors.hpp"

namespace rcsurf {

namespace {
constexpr cplx I{0.0, 1.0};

int wrap(int i, int n) { return ((i % n) + n) % n; }
}  // namespace

cplx quad_coeff(const Mat2& f) { return 0.25 * cplx(f(0, 0) - f(1, 1), -(f(0, 1) + f(1, 0))); }

cplx phi_coeff(const SurfaceSample& s, double tol) {
    isothermal_factor(s, tol);
    return quad_coeff(second_fundamental(s));
}

PsiResult psi_coeff(const SurfaceSample& s, double tol) {
    isothermal_factor(s, tol);
    ExtrinsicData d = extrinsic(s);
    PsiResult r;
    r.psi = quad_coeff(d.III);
    r.identity_residual = std::abs(r.psi - d.bold_H * quad_coeff(d.II));
    return r;
}

cplx ComplexGrid::at(int i, int j) const {
    if (periodic_u) i = wrap(i, nu);
    if (periodic_v) j = wrap(j, nv);
    if (i < 0 || i >= nu || j < 0 || j >= nv) throw Error(Errc::StencilOutsideDomain, "grid stencil out of range");
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j)];
}

cplx dzbar(const ComplexGrid& f, int i, int j) {
    auto d4 = [](cplx m2, cplx m1, cplx p1, cplx p2, double h) { return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h); };
    cplx fu = d4(f.at(i - 2, j), f.at(i - 1, j), f.at(i + 1, j), f.at(i + 2, j), f.du);
    cplx fv = d4(f.at(i, j - 2), f.at(i, j - 1), f.at(i, j + 1), f.at(i, j + 2), f.dv);
    return 0.5 * (fu + I * fv);
}

std::vector<double> cr_residual(const ComplexGrid& f) {
    std::vector<double> out(f.values.size(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < f.nu; ++i)
        for (int j = 0; j < f.nv; ++j) {
            bool inside = (f.periodic_u || (i >= 2 && i < f.nu - 2)) && (f.periodic_v || (j >= 2 && j < f.nv - 2));
            if (inside)
                out[static_cast<std::size_t>(i) * static_cast<std::size_t>(f.nv) + static_cast<std::size_t>(j)] =
                    std::abs(dzbar(f, i, j));
        }
    return out;
}

Vec3 l_tensor(const SurfaceSample& s, const AmbientTensors& t) {
    ExtrinsicData d = extrinsic(s);
    Vec3 curv = apply_curvature(t.R, s.E1, s.E2, s.N);
    // T_S is a 2-form, so T_S(Ē1,Ē2) = det(P) T_S(X_u,X_v).
    Vec3 ts = det(s.P) * surface_torsion(s);
    Vec3 jts = s.J(ts);
    auto c = s.tangent_coords(jts);
    Vec3 wj = s.tangent(d.W(0, 0) * c[0] + d.W(0, 1) * c[1], d.W(1, 0) * c[0] + d.W(1, 1) * c[1]);
    return curv - s.J(wj);
}

Vec3 l_tensor(const Surface& surf, double u, double v) {
    SurfaceSample s = surf.sample(u, v);
    return l_tensor(s, tensors(surf.ambient().jet(s.p, 2)));
}

HopfTerms hopf_identity(const Surface& surf, const ComplexGrid& phi, const ComplexGrid& bold_H, double u, double v,
                        int i, int j, double tol) {
    SurfaceSample s = surf.sample(u, v);
    double lam = isothermal_factor(s, tol);
    AmbientTensors t = tensors(surf.ambient().jet(s.p, 2));
    Mat2 II = second_fundamental(s);

    HopfTerms h;
    h.lhs = dzbar(phi, i, j);

    // R(X_u, X_v, ∂z, N) with ∂z = ½(X_u − i X_v).
    cplx Rz = 0.5 * cplx(apply_lowered(t.Rlow, s.X[0], s.X[1], s.X[0], s.N),
                         -apply_lowered(t.Rlow, s.X[0], s.X[1], s.X[1], s.N));
    auto y = s.tangent_coords(s.J(surface_torsion(s)));
    double IIu = y[0] * II(0, 0) + y[1] * II(1, 0);
    double IIv = y[0] * II(0, 1) + y[1] * II(1, 1);
    cplx IIz = 0.5 * cplx(IIu, -IIv);

    h.rhs = 0.25 * lam * lam * std::conj(dzbar(bold_H, i, j)) - 0.5 * I * Rz - 0.5 * IIz;
    h.residual = std::abs(h.lhs - h.rhs);
    return h;
}

cplx bold_h_isothermal(const SurfaceSample& s, double tol) {
    double lam = isothermal_factor(s, tol);
    double re = s.dot(s.N, s.nabla_XX(0, 0) + s.nabla_XX(1, 1));
    double im = s.dot(s.N, s.nabla_XX(0, 1) - s.nabla_XX(1, 0));
    return cplx(re, im) / (lam * lam);
}

}  // namespace rcsurf
