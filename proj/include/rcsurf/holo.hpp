#pragma once

// Complex layer on isothermal charts, z = u + iv, ∂z = ½(∂u − i∂v),
// ∂z̄ = ½(∂u + i∂v). Tensors are extended complex-bilinearly.

#include <complex>
#include <vector>

#include "rcsurf/ambient.hpp"
#include "rcsurf/extrinsic.hpp"
#include "rcsurf/surface.hpp"

namespace rcsurf {

using cplx = std::complex<double>;

/// Coefficient of dz² of II(∂z,∂z) dz² (or III when `form` is III).
cplx quad_coeff(const Mat2& form);

/// Hopf differential coefficient; NotIsothermal if G is not λ² I within tol.
cplx phi_coeff(const SurfaceSample& s, double tol = 1e-9);

struct PsiResult {
    cplx psi;
    double identity_residual = 0.0;  // |ψ − 𝑯φ|
};

PsiResult psi_coeff(const SurfaceSample& s, double tol = 1e-9);

/// Complex field on a sampling lattice, index i_u * nv + i_v.
struct ComplexGrid {
    int nu = 0;
    int nv = 0;
    double du = 0.0;
    double dv = 0.0;
    bool periodic_u = false;
    bool periodic_v = false;
    std::vector<cplx> values;

    cplx at(int i, int j) const;
};

/// ∂f/∂z̄ by 4th-order central differences; StencilOutsideDomain within
/// two nodes of a non-periodic edge.
cplx dzbar(const ComplexGrid& f, int i, int j);

/// |∂f/∂z̄| per node; NaN where the stencil leaves the grid.
std::vector<double> cr_residual(const ComplexGrid& f);

/// L(Ē1, Ē2) = R̃(Ē1,Ē2)N − J W J T_S(Ē1,Ē2).
Vec3 l_tensor(const SurfaceSample& s, const AmbientTensors& t);
Vec3 l_tensor(const Surface& surf, double u, double v);

struct HopfTerms {
    cplx lhs;        // ∂z̄ φ
    cplx rhs;
    double residual = 0.0;
};

/// Both sides of the Hopf-differential identity at grid node (i, j), given
/// grids of φ and 𝑯 over the same lattice as the surface samples.
HopfTerms hopf_identity(const Surface& surf, const ComplexGrid& phi, const ComplexGrid& bold_H, double u, double v,
                        int i, int j, double tol = 1e-9);

/// 𝑯 from ambient covariant derivatives of the coordinate fields.
cplx bold_h_isothermal(const SurfaceSample& s, double tol = 1e-9);

}  // namespace rcsurf
