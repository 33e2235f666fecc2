#include "rcsurf/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcsurf/errors.hpp"

namespace rcsurf {

namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

int pair_index(int c, int d) {
    if (c > d) std::swap(c, d);
    for (int k = 0; k < 6; ++k)
        if (kPairs[static_cast<std::size_t>(k)][0] == c && kPairs[static_cast<std::size_t>(k)][1] == d) return k;
    return -1;
}

std::string point_text(const Vec3& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", p[0], p[1], p[2]);
    return buf;
}

// Leading principal minors; cheap SPD test for a 3x3.
bool positive_definite(const Mat3& g) {
    double m1 = g(0, 0);
    double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    return m1 > 0.0 && m2 > 0.0 && det(g) > 0.0;
}

}  // namespace

bool ChartBox::contains(const Vec3& p) const {
    for (int i = 0; i < 3; ++i) {
        auto k = static_cast<std::size_t>(i);
        if (!(p[i] > lo[k] || std::isinf(lo[k])) || !(p[i] < hi[k] || std::isinf(hi[k]))) return false;
    }
    return true;
}

const expr::VarSet& Ambient::vars() {
    static const expr::VarSet v{"x", "y", "z"};
    return v;
}

Ambient Ambient::from_frame(const Matrix& F, ChartBox box) {
    Ambient a;
    a.frame_defined_ = true;
    a.F_ = F;
    a.box_ = box;

    std::vector<expr::Expr> roots;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) roots.push_back(F[j][i]);
    std::array<std::array<expr::Expr, 9>, 3> dF;
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) {
                dF[c][3 * j + i] = expr::diff(F[j][i], c);
                roots.push_back(dF[c][3 * j + i]);
            }
    a.order1_ = std::make_shared<const expr::Program>(roots);
    for (auto [c, d] : kPairs)
        for (int e = 0; e < 9; ++e) roots.push_back(expr::diff(dF[c][e], d));
    a.order2_ = std::make_shared<const expr::Program>(roots);
    return a;
}

Ambient Ambient::from_coefficients(const Matrix& g, const std::array<expr::Expr, 27>& gamma, ChartBox box) {
    Ambient a;
    a.frame_defined_ = false;
    a.g_ = g;
    a.gamma_ = gamma;
    a.box_ = box;

    std::vector<expr::Expr> roots;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) roots.push_back(g[i][j]);
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) roots.push_back(expr::diff(g[i][j], c));
    for (const auto& e : gamma) roots.push_back(e);
    a.order1_ = std::make_shared<const expr::Program>(roots);
    for (int c = 0; c < 3; ++c)
        for (const auto& e : gamma) roots.push_back(expr::diff(e, c));
    a.order2_ = std::make_shared<const expr::Program>(roots);
    return a;
}

const Ambient::Matrix& Ambient::frame() const {
    if (!frame_defined_) throw Error(Errc::NotWeitzenboeck, "ambient is coefficient-defined; no global frame");
    return F_;
}

AmbientJet Ambient::jet(const Vec3& p, int order) const {
    if (!box_.contains(p)) throw Error(Errc::OutsideChart, "point " + point_text(p) + " is outside the chart");
    const expr::Program& prog = order >= 2 ? *order2_ : *order1_;
    std::vector<double> out(prog.outputs());
    prog.run(p.c, out);

    AmbientJet j;
    j.p = p;
    j.has_dgamma = order >= 2;
    if (frame_defined_) {
        j.has_frame = true;
        std::copy(out.begin(), out.begin() + 9, j.F.a.begin());
        for (int c = 0; c < 3; ++c) std::copy(out.begin() + 9 + 9 * c, out.begin() + 18 + 9 * c, j.dF[c].a.begin());
        double d = det(j.F);
        if (!(d >= 1e-9))
            throw Error(Errc::SingularFrame, "frame determinant " + std::to_string(d) + " at " + point_text(p) +
                                                 " (must be >= 1e-9 for a positively oriented frame)");
        j.Finv = inverse(j.F);
        j.g = transpose(j.Finv) * j.Finv;
        j.ginv = j.F * transpose(j.F);

        std::array<Mat3, 3> A;  // A_c = F⁻¹ ∂cF F⁻¹
        for (int c = 0; c < 3; ++c) {
            Mat3 G = -(j.dF[c] * j.Finv);
            for (int k = 0; k < 3; ++k)
                for (int b = 0; b < 3; ++b) j.gamma[gidx(k, c, b)] = G(k, b);
            A[c] = j.Finv * j.dF[c] * j.Finv;
            Mat3 dg = -(transpose(A[c]) * j.Finv) - transpose(j.Finv) * A[c];
            for (int e = 0; e < 9; ++e) j.dg[9 * c + e] = dg.a[e];
        }
        if (j.has_dgamma) {
            for (int c = 0; c < 3; ++c)
                for (int a = 0; a < 3; ++a) {
                    Mat3 d2;
                    int pi = pair_index(c, a);
                    std::copy(out.begin() + 36 + 9 * pi, out.begin() + 45 + 9 * pi, d2.a.begin());
                    Mat3 D = -(d2 * j.Finv) + j.dF[a] * A[c];
                    for (int k = 0; k < 3; ++k)
                        for (int b = 0; b < 3; ++b) j.dgamma[27 * c + gidx(k, a, b)] = D(k, b);
                }
        }
    } else {
        std::copy(out.begin(), out.begin() + 9, j.g.a.begin());
        std::copy(out.begin() + 9, out.begin() + 36, j.dg.begin());
        std::copy(out.begin() + 36, out.begin() + 63, j.gamma.begin());
        if (j.has_dgamma) std::copy(out.begin() + 63, out.begin() + 144, j.dgamma.begin());
        if (!positive_definite(j.g))
            throw Error(Errc::SingularMetric, "metric is not positive definite at " + point_text(p));
        j.ginv = inverse(j.g);
    }
    return j;
}

void Ambient::validate(std::span<const Vec3> points) const {
    for (const Vec3& p : points) {
        AmbientJet j = jet(p, 1);
        if (!frame_defined_) {
            double r = metric_compat_residual(j);
            if (r > 1e-6)
                throw Error(Errc::MetricIncompatible,
                            "metric-compatibility residual " + std::to_string(r) + " at " + point_text(p));
        }
    }
}

AmbientTensors tensors(const AmbientJet& j) {
    if (!j.has_dgamma) throw Error(Errc::ConfigError, "curvature needs an order-2 jet");
    AmbientTensors t;
    const auto& G = j.gamma;
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) t.T[gidx(k, a, b)] = G[gidx(k, a, b)] - G[gidx(k, b, a)];

    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k)
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    double r = j.dgamma[27 * a + gidx(l, b, k)] - j.dgamma[27 * b + gidx(l, a, k)];
                    for (int m = 0; m < 3; ++m)
                        r += G[gidx(l, a, m)] * G[gidx(m, b, k)] - G[gidx(l, b, m)] * G[gidx(m, a, k)];
                    t.R[ridx(l, k, a, b)] = r;
                }

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) s += t.R[ridx(l, b, l, a)];
            t.Ric(a, b) = s;
        }
    double scal = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) scal += j.ginv(a, b) * t.Ric(a, b);
    t.scal = scal;

    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < 3; ++m) s += t.R[ridx(m, k, a, b)] * j.g(m, l);
                    t.Rlow[ridx(a, b, k, l)] = s;
                }
    return t;
}

std::array<double, 27> christoffel(const Ambient& a, const Vec3& p) { return a.jet(p, 1).gamma; }

std::array<double, 27> torsion(const Ambient& a, const Vec3& p) {
    auto G = christoffel(a, p);
    std::array<double, 27> T{};
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) T[gidx(k, i, j)] = G[gidx(k, i, j)] - G[gidx(k, j, i)];
    return T;
}

AmbientTensors curvature(const Ambient& a, const Vec3& p) { return tensors(a.jet(p, 2)); }

Vec3 connection_term(const std::array<double, 27>& gamma, const Vec3& X, const Vec3& Y) {
    Vec3 r;
    for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) s += gamma[gidx(k, i, j)] * X[i] * Y[j];
        r[k] = s;
    }
    return r;
}

Vec3 apply_torsion(const std::array<double, 27>& T, const Vec3& X, const Vec3& Y) { return connection_term(T, X, Y); }

Vec3 apply_curvature(const std::array<double, 81>& R, const Vec3& X, const Vec3& Y, const Vec3& Z) {
    Vec3 r;
    for (int l = 0; l < 3; ++l) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += R[ridx(l, k, i, j)] * X[i] * Y[j] * Z[k];
        r[l] = s;
    }
    return r;
}

double apply_lowered(const std::array<double, 81>& Rlow, const Vec3& W, const Vec3& X, const Vec3& Y, const Vec3& Z) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) s += Rlow[ridx(a, b, c, d)] * W[a] * X[b] * Y[c] * Z[d];
    return s;
}

double sectional(const AmbientTensors& t, const Mat3& g, const Vec3& u, const Vec3& v) {
    double uu = inner(g, u, u), vv = inner(g, v, v), uv = inner(g, u, v);
    double den = uu * vv - uv * uv;
    if (!(den >= 1e-12)) throw Error(Errc::DegeneratePlane, "vectors do not span a plane");
    return apply_lowered(t.Rlow, u, v, v, u) / den;
}

double sectional(const Ambient& a, const Vec3& p, const Vec3& u, const Vec3& v) {
    AmbientJet j = a.jet(p, 2);
    return sectional(tensors(j), j.g, u, v);
}

double metric_compat_residual(const AmbientJet& j) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double r = j.dg[9 * i + 3 * a + b];
                for (int l = 0; l < 3; ++l) r -= j.gamma[gidx(l, i, a)] * j.g(l, b) + j.gamma[gidx(l, i, b)] * j.g(a, l);
                worst = std::max(worst, std::fabs(r));
            }
    return worst;
}

double metric_compat_residual(const Ambient& a, const Vec3& p) { return metric_compat_residual(a.jet(p, 1)); }

SufficientCondition sufficient_condition_check(const AmbientTensors& t, const Mat3& g, double tol) {
    SufficientCondition out;
    double third = t.scal / 3.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out.ricci_residual = std::max(out.ricci_residual, std::fabs(t.Ric(a, b) - third * g(a, b)));

    std::array<double, 27> C{};
    Vec3 basis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Vec3 c = i == j ? Vec3{} : cross_metric(g, 1, basis[i], basis[j]);
            for (int k = 0; k < 3; ++k) C[gidx(k, i, j)] = c[k];
        }
    double tc = 0.0, cc = 0.0;
    for (int e = 0; e < 27; ++e) {
        tc += t.T[e] * C[e];
        cc += C[e] * C[e];
    }
    out.kappa = tc / cc;
    for (int e = 0; e < 27; ++e) out.torsion_residual = std::max(out.torsion_residual, std::fabs(t.T[e] - out.kappa * C[e]));
    out.ricci_proportional = out.ricci_residual <= tol;
    out.torsion_proportional = out.torsion_residual <= tol;
    return out;
}

SufficientCondition sufficient_condition_check(const Ambient& a, const Vec3& p, double tol) {
    AmbientJet j = a.jet(p, 2);
    return sufficient_condition_check(tensors(j), j.g, tol);
}

}  // namespace rcsurf
