#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "rcsurf/ambient.hpp"
#include "rcsurf/extrinsic.hpp"
#include "rcsurf/surface.hpp"

namespace rcsurf {

using UV = std::array<double, 2>;
using TangentCoords = std::array<double, 2>;

/// Gauss map data at one sample of a surface in a frame-defined ambient.
struct GaussData {
    Vec3 n;                                 // N^i = ⟨N, E_i⟩
    std::array<Vec3, 2> dn;                 // ∂_u n, ∂_v n (exact chain rule)
    std::array<TangentCoords, 3> e_top;     // E_i^⊤ in the (X_u, X_v) basis
    std::array<TangentCoords, 3> e_cross;   // E_i^× = N × E_i

    /// Derivative of n along a tangent vector given by coordinates.
    Vec3 along(const TangentCoords& w) const { return w[0] * dn[0] + w[1] * dn[1]; }
};

/// Throws NotWeitzenboeck when the sample's ambient has no frame.
GaussData gauss_map(const Surface& surf, const SurfaceSample& s);

struct DivCurl {
    double div_top = 0.0;
    double div_cross = 0.0;
    Vec3 curl_top;
    Vec3 curl_cross;
};

DivCurl div_curl(const GaussData& g);

/// max of |Div⊤ + H|, |Div× − ★τ|, ‖Curl⊤ + ★τ n‖, ‖Curl× + H n‖.
double div_curl_residual(const DivCurl& dc, const GaussData& g, const ExtrinsicData& d);

/// W from the differential of the Gauss map, −Σ dN^i ⊗ E_i, in the (X_u, X_v) basis.
Mat2 weingarten_from_gauss(const SurfaceSample& s, const GaussData& g);

/// n · (n_u × n_v), the pulled-back sphere area density.
double sphere_area_density(const GaussData& g);

struct ConformalVerdict {
    bool conformal = false;
    double k = 0.0;
    double residual = 0.0;  // ‖G_n − k G‖ / ‖G_n‖
};

ConformalVerdict conformality(const SurfaceSample& s, const GaussData& g, double tol);

struct GaugeField {
    expr::Expr theta;                // in ambient variables x, y, z
    std::array<expr::Expr, 3> e;     // axis, frame components
};

/// Frame F' = F · rodrigues(e, θ) as expressions. Checks that e is unit at
/// the given chart points (NonUnitAxis).
Ambient apply_gauge(const Ambient& a, const GaugeField& gauge, std::span<const Vec3> check_points = {});

/// max |𝑯(s·g) − 𝑯(s) e^{iθ}| over points; the axis field must equal the
/// Gauss map on the surface to 1e-8 (AxisNotNormal).
double gauge_theorem_residual(const Surface& surf, const GaugeField& gauge, std::span<const UV> points);

/// max residual of the gauge-transformation formulas for H and ★τ.
double general_gauge_residual(const Surface& surf, const GaugeField& gauge, std::span<const UV> points);

/// Single-point forms; `gauged` is gauged_surface(surf, gauge).
double gauge_theorem_residual_at(const Surface& surf, const Surface& gauged, const GaugeField& gauge, const UV& uv);
double general_gauge_residual_at(const Surface& surf, const Surface& gauged, const GaugeField& gauge, const UV& uv);

/// Surface with the same map and domain in a gauged ambient.
Surface gauged_surface(const Surface& surf, const GaugeField& gauge);

struct DegreeResult {
    long degree = 0;
    double raw = 0.0;
    double residual = 0.0;
};

/// (1/4π)∫ n·(n_u × n_v) du dv on a quadrature grid; NotClosed unless the
/// surface is closed (both axes periodic or declared closed).
DegreeResult gauss_degree(const Surface& surf, int nu, int nv);

}  // namespace rcsurf
