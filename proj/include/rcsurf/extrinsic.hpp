#pragma once

#include <complex>
#include <optional>

#include "rcsurf/surface.hpp"

namespace rcsurf {

// Matrices of linear maps on the tangent plane hold images in columns:
// W X_a = W(c,a) X_c. Bilinear forms hold II(a,b) = II(X_a, X_b).

struct ExtrinsicData {
    Mat2 II;
    Mat2 W;
    Mat2 W_on;
    Mat2 III;
    double K_e = 0.0;
    double H = 0.0;
    double star_tau = 0.0;          // W_on(1,0) − W_on(0,1)
    double star_tau_torsion = 0.0;  // ⟨N, T̃(Ē1,Ē2)⟩
    double tau_uv = 0.0;            // ⟨N, T̃(X_u,X_v)⟩
    std::complex<double> bold_H;
};

Mat2 second_fundamental(const SurfaceSample& s);
ExtrinsicData extrinsic(const SurfaceSample& s);

struct WeingartenResult {
    Mat2 W;
    Mat2 W_from_normal;
    double cross_check_residual = 0.0;
};

/// Algebraic W together with the −∇̃N path (FD of N along the surface).
WeingartenResult weingarten(const Surface& surf, double u, double v);

/// |R̃(X_u,X_v,X_v,X_u) − R_S(X_u,X_v,X_v,X_u) + II_uu II_vv − II_uv II_vu|.
double gauss_equation_residual(const Surface& surf, double u, double v);
double gauss_equation_residual(const SurfaceSample& s, const AmbientTensors& t, const SurfaceCurvature& sc);

struct CurvatureDecomposition {
    std::optional<double> egregium;  // only for flat ambients
    double sectional_split = 0.0;
    double K_intrinsic = 0.0;
    double K_e = 0.0;
    double ambient_sectional = 0.0;
};

CurvatureDecomposition curvature_decomposition_residual(const Surface& surf, double u, double v);
CurvatureDecomposition curvature_decomposition(const SurfaceSample& s, const ExtrinsicData& d,
                                               const AmbientTensors& t, double K_intrinsic);

struct Classification {
    bool umbilic = false;
    bool minimal_point = false;
    bool geodesic_point = false;
};

Classification classify(const ExtrinsicData& d, double tol = 1e-7);

}  // namespace rcsurf
