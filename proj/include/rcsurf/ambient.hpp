#pragma once

// Riemann-Cartan 3-manifolds on a chart of R^3.
//
// Index conventions (chart components):
//   Γ^k_{ij}:   ∇_{∂i} ∂j = Γ^k_{ij} ∂k, stored at gamma[9k + 3i + j]
//   T^k_{ij}:   Γ^k_{ij} − Γ^k_{ji}
//   R^l_{kij}:  R(∂i,∂j)∂k = R^l_{kij} ∂l, stored at R[27l + 9k + 3i + j]
//               R^l_{kij} = ∂iΓ^l_{jk} − ∂jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}
//   R_{ijkl}:   ⟨R(∂i,∂j)∂k, ∂l⟩ = R^m_{kij} g_{ml}, stored at Rlow[27i + 9j + 3k + l]
//   Ric_{ab}:   trace of Z ↦ R(Z,∂a)∂b, i.e. R^l_{b l a}; not symmetric in general
//   Scal:       g^{ab} Ric_{ab}
//
// A frame-defined ambient takes F with columns E_i = F^j_i ∂j (F[j][i] is
// row j, column i). Its connection makes the frame parallel:
//   Γ_a = −(∂aF) F⁻¹ as a matrix (row k, column b).

#include <array>
#include <limits>
#include <memory>
#include <span>

#include "rcsurf/expr.hpp"
#include "rcsurf/so3.hpp"

namespace rcsurf {

constexpr int gidx(int k, int i, int j) { return 9 * k + 3 * i + j; }
constexpr int ridx(int a, int b, int c, int d) { return 27 * a + 9 * b + 3 * c + d; }

struct ChartBox {
    std::array<double, 3> lo{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
    std::array<double, 3> hi{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};

    bool contains(const Vec3& p) const;
};

/// Values at one point. dgamma is only filled for order 2.
struct AmbientJet {
    Vec3 p;
    Mat3 g;
    Mat3 ginv;
    std::array<double, 27> gamma{};
    std::array<double, 27> dg{};      // ∂c g_{ij} at [9c + 3i + j]
    std::array<double, 81> dgamma{};  // ∂c Γ^k_{ij} at [27c + gidx(k,i,j)]
    bool has_dgamma = false;

    bool has_frame = false;
    Mat3 F;
    Mat3 Finv;
    std::array<Mat3, 3> dF{};
};

struct AmbientTensors {
    std::array<double, 27> T{};
    std::array<double, 81> R{};
    std::array<double, 81> Rlow{};
    Mat3 Ric;
    double scal = 0.0;
};

class Ambient {
public:
    using Matrix = std::array<std::array<expr::Expr, 3>, 3>;

    /// Variables of every ambient expression: x, y, z.
    static const expr::VarSet& vars();

    static Ambient from_frame(const Matrix& F, ChartBox box = {});
    static Ambient from_coefficients(const Matrix& g, const std::array<expr::Expr, 27>& gamma, ChartBox box = {});

    bool frame_defined() const noexcept { return frame_defined_; }
    /// Throws NotWeitzenboeck for coefficient-defined ambients.
    const Matrix& frame() const;
    const Matrix& metric_exprs() const { return g_; }
    const std::array<expr::Expr, 27>& gamma_exprs() const { return gamma_; }
    const ChartBox& box() const noexcept { return box_; }

    /// order 1: g, Γ (and the frame); order 2 adds ∂Γ.
    AmbientJet jet(const Vec3& p, int order = 1) const;

    /// Frame determinant / metric positivity at every point; for
    /// coefficient-defined ambients also metric compatibility (> 1e-6 fails).
    void validate(std::span<const Vec3> points) const;

private:
    Ambient() = default;

    bool frame_defined_ = false;
    Matrix F_;
    Matrix g_;
    std::array<expr::Expr, 27> gamma_;
    ChartBox box_;
    std::shared_ptr<const expr::Program> order1_;
    std::shared_ptr<const expr::Program> order2_;
};

AmbientTensors tensors(const AmbientJet& j);

std::array<double, 27> christoffel(const Ambient& a, const Vec3& p);
std::array<double, 27> torsion(const Ambient& a, const Vec3& p);
AmbientTensors curvature(const Ambient& a, const Vec3& p);

/// Γ(X,Y)^k = Γ^k_{ij} X^i Y^j, the connection term of ∇_X Y.
Vec3 connection_term(const std::array<double, 27>& gamma, const Vec3& X, const Vec3& Y);
Vec3 apply_torsion(const std::array<double, 27>& T, const Vec3& X, const Vec3& Y);
/// R(X,Y)Z.
Vec3 apply_curvature(const std::array<double, 81>& R, const Vec3& X, const Vec3& Y, const Vec3& Z);
double apply_lowered(const std::array<double, 81>& Rlow, const Vec3& W, const Vec3& X, const Vec3& Y, const Vec3& Z);

double sectional(const AmbientTensors& t, const Mat3& g, const Vec3& u, const Vec3& v);
double sectional(const Ambient& a, const Vec3& p, const Vec3& u, const Vec3& v);

double metric_compat_residual(const AmbientJet& j);
double metric_compat_residual(const Ambient& a, const Vec3& p);

struct SufficientCondition {
    bool ricci_proportional = false;
    bool torsion_proportional = false;
    double kappa = 0.0;
    double ricci_residual = 0.0;
    double torsion_residual = 0.0;
};

SufficientCondition sufficient_condition_check(const AmbientTensors& t, const Mat3& g, double tol);
SufficientCondition sufficient_condition_check(const Ambient& a, const Vec3& p, double tol);

}  // namespace rcsurf
