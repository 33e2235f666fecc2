#include "rcsurf/surface.hpp"

#include <algorithm>
#include <cmath>

#include "rcsurf/errors.hpp"

namespace rcsurf {

Mat2 operator+(const Mat2& x, const Mat2& y) { return {{x.a[0] + y.a[0], x.a[1] + y.a[1], x.a[2] + y.a[2], x.a[3] + y.a[3]}}; }
Mat2 operator-(const Mat2& x, const Mat2& y) { return {{x.a[0] - y.a[0], x.a[1] - y.a[1], x.a[2] - y.a[2], x.a[3] - y.a[3]}}; }
Mat2 operator*(double s, const Mat2& x) { return {{s * x.a[0], s * x.a[1], s * x.a[2], s * x.a[3]}}; }

Mat2 operator*(const Mat2& x, const Mat2& y) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
}

Mat2 transpose(const Mat2& x) { return {{x.a[0], x.a[2], x.a[1], x.a[3]}}; }
double det(const Mat2& x) { return x.a[0] * x.a[3] - x.a[1] * x.a[2]; }
double trace(const Mat2& x) { return x.a[0] + x.a[3]; }

Mat2 inverse(const Mat2& x) {
    double d = det(x);
    if (d == 0.0) throw Error(Errc::DegenerateParameterization, "singular 2x2 matrix");
    return (1.0 / d) * Mat2{{x.a[3], -x.a[1], -x.a[2], x.a[0]}};
}

double max_abs(const Mat2& x) {
    return std::max({std::fabs(x.a[0]), std::fabs(x.a[1]), std::fabs(x.a[2]), std::fabs(x.a[3])});
}

std::array<double, 2> SurfaceSample::tangent_coords(const Vec3& V) const {
    double b0 = dot(V, X[0]), b1 = dot(V, X[1]);
    return {Ginv(0, 0) * b0 + Ginv(0, 1) * b1, Ginv(1, 0) * b0 + Ginv(1, 1) * b1};
}

Vec3 SurfaceSample::nabla_XX(int a, int b) const {
    return XX[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +
           connection_term(jet.gamma, X[static_cast<std::size_t>(a)], X[static_cast<std::size_t>(b)]);
}

Vec3 SurfaceSample::J(const Vec3& V) const { return cross_metric(jet.g, 1, N, V); }

const expr::VarSet& Surface::vars() {
    static const expr::VarSet v{"u", "v"};
    return v;
}

Surface::Surface(std::shared_ptr<const Ambient> ambient, const std::array<expr::Expr, 3>& X, Domain domain,
                 bool declared_isothermal, bool closed)
    : ambient_(std::move(ambient)), X_(X), domain_(domain), isothermal_(declared_isothermal), closed_(closed) {
    for (int a = 0; a < 2; ++a)
        if (!(domain_.extent(a) > 0.0)) throw Error(Errc::ConfigError, "surface domain has non-positive extent");
    std::vector<expr::Expr> roots;
    for (const auto& e : X_) roots.push_back(e);
    for (int a = 0; a < 2; ++a)
        for (const auto& e : X_) roots.push_back(expr::diff(e, a));
    for (auto [a, b] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 1}})
        for (const auto& e : X_) roots.push_back(expr::diff(expr::diff(e, a), b));
    prog_ = std::make_shared<const expr::Program>(roots);
}

void Surface::map_jet(double u, double v, Vec3& p, std::array<Vec3, 2>& X,
                      std::array<std::array<Vec3, 2>, 2>& XX) const {
    std::array<double, 2> uv{u, v};
    std::array<double, 18> out{};
    prog_->run(uv, out);
    auto vec = [&](int k) { return Vec3{out[3 * k], out[3 * k + 1], out[3 * k + 2]}; };
    p = vec(0);
    X[0] = vec(1);
    X[1] = vec(2);
    XX[0][0] = vec(3);
    XX[0][1] = XX[1][0] = vec(4);
    XX[1][1] = vec(5);
}

SurfaceSample Surface::sample(double u, double v) const {
    for (int a = 0; a < 2; ++a) {
        double x = a == 0 ? u : v;
        auto k = static_cast<std::size_t>(a);
        if (!domain_.periodic[k] && (x < domain_.lo[k] || x > domain_.hi[k]))
            throw Error(Errc::OutsideChart, "surface parameter outside its domain");
    }
    SurfaceSample s;
    s.u = u;
    s.v = v;
    map_jet(u, v, s.p, s.X, s.XX);
    s.jet = ambient_->jet(s.p, 1);
    const Mat3& g = s.jet.g;

    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s.G(a, b) = inner(g, s.X[a], s.X[b]);
    double dG = det(s.G);
    s.area = dG > 0.0 ? std::sqrt(dG) : 0.0;
    if (!(s.area >= 1e-9)) throw Error(Errc::DegenerateParameterization, "tangent vectors are dependent");
    s.Ginv = inverse(s.G);

    Vec3 c = cross_metric(g, 1, s.X[0], s.X[1]);
    s.N = c / std::sqrt(inner(g, c, c));

    double lu = std::sqrt(s.G(0, 0));
    s.E1 = s.X[0] / lu;
    double proj = inner(g, s.X[1], s.E1);
    Vec3 w = s.X[1] - proj * s.E1;
    double m = std::sqrt(inner(g, w, w));
    s.E2 = w / m;
    s.P = Mat2{{1.0 / lu, -proj / (m * lu), 0.0, 1.0 / m}};

    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Vec3 nab = s.nabla_XX(a, b);
            double d0 = inner(g, nab, s.X[0]), d1 = inner(g, nab, s.X[1]);
            for (int cc = 0; cc < 2; ++cc)
                s.gammaS[static_cast<std::size_t>(4 * cc + 2 * a + b)] = s.Ginv(cc, 0) * d0 + s.Ginv(cc, 1) * d1;
        }
    return s;
}

void Surface::validate(int n) const {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double u = domain_.lo[0] + (i + 0.5) * domain_.extent(0) / n;
            double v = domain_.lo[1] + (j + 0.5) * domain_.extent(1) / n;
            SurfaceSample s = sample(u, v);
            pts.push_back(s.p);
        }
    ambient_->validate(pts);
}

double Surface::stencil_step(int axis, double x, bool one_sided, int* offset) const {
    auto k = static_cast<std::size_t>(axis);
    double h0 = 1e-3 * domain_.extent(axis);
    if (offset) *offset = 0;
    if (domain_.periodic[k]) return h0;
    double dlo = x - domain_.lo[k], dhi = domain_.hi[k] - x;
    double dist = std::min(dlo, dhi);
    if (dist >= 1e-4 * domain_.extent(axis)) return std::min(h0, dist / 100.0);
    if (!one_sided) throw Error(Errc::StencilOutsideDomain, "stencil crosses a non-periodic domain edge");
    if (offset) *offset = dlo < dhi ? 1 : -1;
    return h0;
}

std::vector<double> Surface::derivative(int axis, double u, double v,
                                        const std::function<std::vector<double>(double, double)>& f,
                                        bool one_sided) const {
    int offset = 0;
    double h = stencil_step(axis, axis == 0 ? u : v, one_sided, &offset);
    auto at = [&](double t) { return axis == 0 ? f(u + t * h, v) : f(u, v + t * h); };
    std::vector<double> out;
    if (offset == 0) {
        auto fm2 = at(-2), fm1 = at(-1), fp1 = at(1), fp2 = at(2);
        out.resize(fp1.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (fm2[i] - 8.0 * fm1[i] + 8.0 * fp1[i] - fp2[i]) / (12.0 * h);
    } else {
        double s = offset;
        std::array<std::vector<double>, 5> fv;
        for (int i = 0; i < 5; ++i) fv[static_cast<std::size_t>(i)] = at(s * i);
        out.resize(fv[0].size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = s * (-25.0 * fv[0][i] + 48.0 * fv[1][i] - 36.0 * fv[2][i] + 16.0 * fv[3][i] - 3.0 * fv[4][i]) /
                     (12.0 * h);
    }
    return out;
}

Vec3 surface_torsion(const SurfaceSample& s) {
    double tu = s.gS(0, 0, 1) - s.gS(0, 1, 0);
    double tv = s.gS(1, 0, 1) - s.gS(1, 1, 0);
    return s.tangent(tu, tv);
}

SurfaceCurvature surface_curvature(const Surface& surf, double u, double v, bool one_sided) {
    auto gamma_at = [&](double uu, double vv) {
        SurfaceSample s = surf.sample(uu, vv);
        return std::vector<double>(s.gammaS.begin(), s.gammaS.end());
    };
    std::array<std::vector<double>, 2> d{surf.derivative(0, u, v, gamma_at, one_sided),
                                         surf.derivative(1, u, v, gamma_at, one_sided)};
    SurfaceSample s = surf.sample(u, v);
    auto dG = [&](int a, int c, int i, int j) { return d[static_cast<std::size_t>(a)][static_cast<std::size_t>(4 * c + 2 * i + j)]; };

    // R^d_{c a b} for (a,b) = (u,v); the other orderings follow by antisymmetry.
    double R[2][2];
    for (int dd = 0; dd < 2; ++dd)
        for (int c = 0; c < 2; ++c) {
            double r = dG(0, dd, 1, c) - dG(1, dd, 0, c);
            for (int e = 0; e < 2; ++e) r += s.gS(dd, 0, e) * s.gS(e, 1, c) - s.gS(dd, 1, e) * s.gS(e, 0, c);
            R[dd][c] = r;
        }
    auto Rfull = [&](int dd, int c, int a, int b) {
        if (a == b) return 0.0;
        return a == 0 ? R[dd][c] : -R[dd][c];
    };
    double scal = 0.0;
    for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
            double ric = 0.0;
            for (int a = 0; a < 2; ++a) ric += Rfull(a, c, a, b);
            scal += s.Ginv(b, c) * ric;
        }
    SurfaceCurvature out;
    out.K = 0.5 * scal;
    out.R_uvvu = R[0][1] * s.G(0, 0) + R[1][1] * s.G(1, 0);
    return out;
}

double intrinsic_curvature(const Surface& s, double u, double v, bool one_sided) {
    return surface_curvature(s, u, v, one_sided).K;
}

double isothermal_factor(const SurfaceSample& s, double tol) {
    double E = s.G(0, 0), F = s.G(0, 1), G = s.G(1, 1);
    double scale = std::max(E, G);
    if (std::fabs(E - G) > tol * scale || std::fabs(F) > tol * scale) throw NotIsothermal(E, F, G);
    return std::sqrt(E);
}

double isothermal_factor(const Surface& s, double u, double v, double tol) {
    return isothermal_factor(s.sample(u, v), tol);
}

}  // namespace rcsurf
