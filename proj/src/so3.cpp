#include "rcsurf/so3.hpp"

#include <algorithm>
#include <cmath>

#include "rcsurf/errors.hpp"

namespace rcsurf {

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vec3& a) { return std::max({std::fabs(a[0]), std::fabs(a[1]), std::fabs(a[2])}); }

Mat3 Mat3::identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Mat3 Mat3::from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 m;
    for (int j = 0; j < 3; ++j) {
        m(0, j) = r0[j];
        m(1, j) = r1[j];
        m(2, j) = r2[j];
    }
    return m;
}

Mat3 Mat3::from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) { return transpose(from_rows(c0, c1, c2)); }

Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

Mat3 operator-(const Mat3& x) { return -1.0 * x; }

Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.a[i] = s * x.a[i];
    return r;
}

Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
}

Vec3 operator*(const Mat3& x, const Vec3& v) {
    return {x(0, 0) * v[0] + x(0, 1) * v[1] + x(0, 2) * v[2], x(1, 0) * v[0] + x(1, 1) * v[1] + x(1, 2) * v[2],
            x(2, 0) * v[0] + x(2, 1) * v[1] + x(2, 2) * v[2]};
}

Mat3 transpose(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = x(j, i);
    return r;
}

double det(const Mat3& x) {
    return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) - x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
           x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
}

double trace(const Mat3& x) { return x(0, 0) + x(1, 1) + x(2, 2); }

Mat3 inverse(const Mat3& x, double min_det) {
    double d = det(x);
    if (!(std::fabs(d) > min_det)) throw Error(Errc::SingularMetric, "matrix determinant too small to invert");
    Mat3 adj;
    adj(0, 0) = x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1);
    adj(0, 1) = x(0, 2) * x(2, 1) - x(0, 1) * x(2, 2);
    adj(0, 2) = x(0, 1) * x(1, 2) - x(0, 2) * x(1, 1);
    adj(1, 0) = x(1, 2) * x(2, 0) - x(1, 0) * x(2, 2);
    adj(1, 1) = x(0, 0) * x(2, 2) - x(0, 2) * x(2, 0);
    adj(1, 2) = x(0, 2) * x(1, 0) - x(0, 0) * x(1, 2);
    adj(2, 0) = x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0);
    adj(2, 1) = x(0, 1) * x(2, 0) - x(0, 0) * x(2, 1);
    adj(2, 2) = x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
    return (1.0 / d) * adj;
}

double max_abs(const Mat3& x) {
    double m = 0.0;
    for (double v : x.a) m = std::max(m, std::fabs(v));
    return m;
}

Mat3 SkewMat3::matrix() const {
    Mat3 m;
    m(0, 1) = -axial_[2];
    m(0, 2) = axial_[1];
    m(1, 0) = axial_[2];
    m(1, 2) = -axial_[0];
    m(2, 0) = -axial_[1];
    m(2, 1) = axial_[0];
    return m;
}

Rotation3::Rotation3(const Mat3& m) : m_(m) {
    double drift = max_abs(transpose(m_) * m_ - Mat3::identity());
    if (!(drift < 1e-6)) throw Error(Errc::NotRotation, "matrix is not orthogonal");
    if (drift > 1e-12) {
        // Newton iteration for the orthogonal polar factor.
        for (int it = 0; it < 20 && drift > 1e-15; ++it) {
            m_ = 0.5 * (m_ + transpose(inverse(m_)));
            drift = max_abs(transpose(m_) * m_ - Mat3::identity());
        }
    }
    double d = det(m_);
    if (std::fabs(d - 1.0) > 1e-12) throw Error(Errc::NotRotation, "determinant is not +1");
}

SkewMat3 hat(const Vec3& a) { return SkewMat3(a); }

Vec3 unhat(const Mat3& A) {
    return {0.5 * (A(2, 1) - A(1, 2)), 0.5 * (A(0, 2) - A(2, 0)), 0.5 * (A(1, 0) - A(0, 1))};
}

Rotation3 rodrigues(const Vec3& e, double theta) {
    if (std::fabs(norm(e) - 1.0) > 1e-9) throw Error(Errc::NonUnitAxis, "rotation axis is not a unit vector");
    Mat3 k = hat(e);
    return Rotation3(Mat3::identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k));
}

Vec3 cross_metric(const Mat3& g, int orientation_sign, const Vec3& u, const Vec3& v) {
    double d = det(g);
    if (!(d > 0.0)) throw Error(Errc::SingularMetric, "metric determinant is not positive");
    Vec3 lowered = cross(u, v);  // ε_{ijm} u^i v^j
    return (orientation_sign * std::sqrt(d)) * (inverse(g) * lowered);
}

SkewMat3 maurer_cartan_pullback(const expr::Expr& theta, const std::array<expr::Expr, 3>& e, int direction,
                                std::span<const double> point) {
    double th = expr::eval(theta, point);
    double dth = expr::eval(expr::diff(theta, direction), point);
    Vec3 ev, dev;
    for (int i = 0; i < 3; ++i) {
        ev[i] = expr::eval(e[static_cast<std::size_t>(i)], point);
        dev[i] = expr::eval(expr::diff(e[static_cast<std::size_t>(i)], direction), point);
    }
    if (std::fabs(norm(ev) - 1.0) > 1e-9) throw Error(Errc::NonUnitAxis, "axis field is not unit at point");
    Vec3 axial = dth * ev + std::sin(th) * dev + (1.0 - std::cos(th)) * cross(dev, ev);
    return SkewMat3(axial);
}

}  // namespace rcsurf
