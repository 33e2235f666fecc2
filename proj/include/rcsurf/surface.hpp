#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "rcsurf/ambient.hpp"
#include "rcsurf/expr.hpp"
#include "rcsurf/so3.hpp"

namespace rcsurf {

/// Row-major 2x2. Index 0 is u, index 1 is v.
struct Mat2 {
    std::array<double, 4> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(2 * i + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(2 * i + j)]; }

    static Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
};

Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);
Mat2 operator*(double s, const Mat2& x);
Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 transpose(const Mat2& x);
double det(const Mat2& x);
double trace(const Mat2& x);
Mat2 inverse(const Mat2& x);
double max_abs(const Mat2& x);

struct Domain {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<bool, 2> periodic{false, false};

    double extent(int axis) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
};

struct SurfaceSample {
    double u = 0.0;
    double v = 0.0;
    Vec3 p;
    std::array<Vec3, 2> X;                    // X_u, X_v
    std::array<std::array<Vec3, 2>, 2> XX;    // second partials
    AmbientJet jet;
    Vec3 N;
    Mat2 G;
    Mat2 Ginv;
    double area = 0.0;                        // sqrt(det G)
    Vec3 E1;
    Vec3 E2;
    Mat2 P;                                   // columns: E1, E2 in the (X_u, X_v) basis
    std::array<double, 8> gammaS{};           // Γ^c_{ab} at [4c + 2a + b]

    double gS(int c, int a, int b) const { return gammaS[static_cast<std::size_t>(4 * c + 2 * a + b)]; }
    /// Ambient vector of tangent coordinates (w^u, w^v).
    Vec3 tangent(double wu, double wv) const { return wu * X[0] + wv * X[1]; }
    /// Coordinates in the (X_u, X_v) basis of the tangential part of V.
    std::array<double, 2> tangent_coords(const Vec3& V) const;
    /// ∇_{X_a} X_b in the ambient.
    Vec3 nabla_XX(int a, int b) const;
    /// J(V) = N ×_g V.
    Vec3 J(const Vec3& V) const;
    double dot(const Vec3& a, const Vec3& b) const { return inner(jet.g, a, b); }
};

class Surface {
public:
    /// Variables of every surface expression: u, v.
    static const expr::VarSet& vars();

    Surface(std::shared_ptr<const Ambient> ambient, const std::array<expr::Expr, 3>& X, Domain domain,
            bool declared_isothermal = false, bool closed = false);

    const Ambient& ambient() const noexcept { return *ambient_; }
    std::shared_ptr<const Ambient> ambient_ptr() const noexcept { return ambient_; }
    const std::array<expr::Expr, 3>& map() const noexcept { return X_; }
    const Domain& domain() const noexcept { return domain_; }
    bool declared_isothermal() const noexcept { return isothermal_; }
    bool closed() const noexcept { return closed_; }

    /// Point, first and second partials of X (chart components).
    void map_jet(double u, double v, Vec3& p, std::array<Vec3, 2>& X, std::array<std::array<Vec3, 2>, 2>& XX) const;

    SurfaceSample sample(double u, double v) const;

    /// Runs ambient validation on an n x n lattice of surface points.
    void validate(int n = 7) const;

    /// Stencil step along `axis` at coordinate `x`. Periodic axes use
    /// 1e-3 * extent. Non-periodic axes use min(1e-3 * extent, dist / 100)
    /// where dist is the distance to the nearer edge; points within
    /// 1e-4 * extent of an edge raise StencilOutsideDomain unless
    /// `one_sided` is set, in which case `offset` receives the stencil shift
    /// (-1 backward, +1 forward).
    double stencil_step(int axis, double x, bool one_sided, int* offset) const;

    /// 4th-order derivative of a vector field along `axis` at (u, v).
    std::vector<double> derivative(int axis, double u, double v,
                                   const std::function<std::vector<double>(double, double)>& f,
                                   bool one_sided = false) const;

private:
    std::shared_ptr<const Ambient> ambient_;
    std::array<expr::Expr, 3> X_;
    Domain domain_;
    bool isothermal_;
    bool closed_;
    std::shared_ptr<const expr::Program> prog_;
};

/// T_S(X_u, X_v) as an ambient (tangent) vector.
Vec3 surface_torsion(const SurfaceSample& s);

struct SurfaceCurvature {
    double K = 0.0;        // ½ Scal_S
    double R_uvvu = 0.0;   // ⟨R_S(X_u,X_v)X_v, X_u⟩
};

SurfaceCurvature surface_curvature(const Surface& s, double u, double v, bool one_sided = false);
double intrinsic_curvature(const Surface& s, double u, double v, bool one_sided = false);

/// λ with G = λ² I; throws NotIsothermal when the chart is not conformal
/// within tol relative to max(E, G).
double isothermal_factor(const SurfaceSample& s, double tol);
double isothermal_factor(const Surface& s, double u, double v, double tol);

}  // namespace rcsurf
