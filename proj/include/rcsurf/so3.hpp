#pragma once

#include <array>
#include <span>

#include "rcsurf/expr.hpp"

namespace rcsurf {

struct Vec3 {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double x, double y, double z) : c{x, y, z} {}

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec3& operator+=(const Vec3& o) {
        for (int i = 0; i < 3; ++i) (*this)[i] += o[i];
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        for (int i = 0; i < 3; ++i) (*this)[i] -= o[i];
        return *this;
    }
    Vec3& operator*=(double s) {
        for (double& x : c) x *= s;
        return *this;
    }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator-(Vec3 a) { return a *= -1.0; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= 1.0 / s; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a);
double max_abs(const Vec3& a);

/// Row-major 3x3; m(i,j) is row i, column j.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(3 * i + j)]; }

    static Mat3 identity();
    static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2);
    static Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2);

    Vec3 row(int i) const { return {(*this)(i, 0), (*this)(i, 1), (*this)(i, 2)}; }
    Vec3 col(int j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }
};

Mat3 operator+(const Mat3& x, const Mat3& y);
Mat3 operator-(const Mat3& x, const Mat3& y);
Mat3 operator-(const Mat3& x);
Mat3 operator*(double s, const Mat3& x);
Mat3 operator*(const Mat3& x, const Mat3& y);
Vec3 operator*(const Mat3& x, const Vec3& v);

Mat3 transpose(const Mat3& x);
double det(const Mat3& x);
double trace(const Mat3& x);
/// Throws SingularMetric when |det| is below `min_det`.
Mat3 inverse(const Mat3& x, double min_det = 0.0);
double max_abs(const Mat3& x);

/// Skew-symmetric matrix held by its axial vector, so A + Aᵀ = 0 exactly.
class SkewMat3 {
public:
    SkewMat3() = default;
    explicit SkewMat3(const Vec3& axial) : axial_(axial) {}

    const Vec3& axial() const noexcept { return axial_; }
    Mat3 matrix() const;
    operator Mat3() const { return matrix(); }  // NOLINT(google-explicit-constructor)

private:
    Vec3 axial_;
};

class Rotation3 {
public:
    Rotation3() : m_(Mat3::identity()) {}
    /// Accepts an approximately special-orthogonal matrix. Drift above 1e-12
    /// is removed by polar decomposition; throws NotRotation if the input is
    /// not close to SO(3) at all.
    explicit Rotation3(const Mat3& m);

    const Mat3& matrix() const noexcept { return m_; }
    operator const Mat3&() const noexcept { return m_; }  // NOLINT(google-explicit-constructor)

private:
    Mat3 m_;
};

SkewMat3 hat(const Vec3& a);
/// Axial vector (A32, A13, A21) of the skew part of A.
Vec3 unhat(const Mat3& A);

Rotation3 rodrigues(const Vec3& e, double theta);

/// Cross product of the metric g with orientation sign s:
/// (u×v)^l = s·sqrt(det g)·g^{lm} ε_{ijm} u^i v^j.
Vec3 cross_metric(const Mat3& g, int orientation_sign, const Vec3& u, const Vec3& v);

inline double inner(const Mat3& g, const Vec3& u, const Vec3& v) { return dot(u, g * v); }

/// dθ(X)ê + sin θ dê(X) + (1 − cos θ) hat(de(X) × e) at `point`, with X the
/// coordinate direction `direction` of the chart variables of θ and e.
SkewMat3 maurer_cartan_pullback(const expr::Expr& theta, const std::array<expr::Expr, 3>& e, int direction,
                                std::span<const double> point);

}  // namespace rcsurf
