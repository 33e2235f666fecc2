#include "rcsurf/gaussmap.hpp"

#include <cmath>
#include <numbers>

#include "rcsurf/errors.hpp"
#include "rcsurf/quadrature.hpp"

namespace rcsurf {

using expr::Expr;

GaussData gauss_map(const Surface& surf, const SurfaceSample& s) {
    (void)surf.ambient().frame();
    const AmbientJet& j = s.jet;
    if (!j.has_frame) throw Error(Errc::NotWeitzenboeck, "sample has no frame data");

    // With g = F⁻ᵀF⁻¹ and det F > 0 the frame components of the unit
    // normal are Fᵀc / |Fᵀc|, c the Euclidean X_u × X_v.
    Vec3 c = cross(s.X[0], s.X[1]);
    Mat3 Ft = transpose(j.F);
    Vec3 m = Ft * c;
    double mn = norm(m);
    GaussData g;
    g.n = m / mn;
    for (int a = 0; a < 2; ++a) {
        auto ka = static_cast<std::size_t>(a);
        Mat3 dFa;
        for (int k = 0; k < 3; ++k) dFa = dFa + s.X[ka][k] * j.dF[static_cast<std::size_t>(k)];
        Vec3 dc = cross(s.XX[ka][0], s.X[1]) + cross(s.X[0], s.XX[ka][1]);
        Vec3 dm = transpose(dFa) * c + Ft * dc;
        g.dn[ka] = (dm - dot(g.n, dm) * g.n) / mn;
    }
    for (int i = 0; i < 3; ++i) {
        auto ki = static_cast<std::size_t>(i);
        Vec3 Ei = j.F.col(i);
        Vec3 b{};
        for (int a = 0; a < 2; ++a) b[a] = (j.Finv * s.X[static_cast<std::size_t>(a)])[i];
        g.e_top[ki] = {s.Ginv(0, 0) * b[0] + s.Ginv(0, 1) * b[1], s.Ginv(1, 0) * b[0] + s.Ginv(1, 1) * b[1]};
        g.e_cross[ki] = s.tangent_coords(s.J(Ei));
    }
    return g;
}

namespace {

// Grad, Div, Curl of a vector function f on S with respect to a triple of
// tangent directions d_i; df[a] holds ∂_a f.
struct Ops {
    std::array<TangentCoords, 3> d;

    double D(int i, const std::array<Vec3, 2>& df, int comp) const {
        auto k = static_cast<std::size_t>(i);
        return d[k][0] * df[0][comp] + d[k][1] * df[1][comp];
    }
    double div(const std::array<Vec3, 2>& df) const { return D(0, df, 0) + D(1, df, 1) + D(2, df, 2); }
    Vec3 curl(const std::array<Vec3, 2>& df) const {
        return {D(1, df, 2) - D(2, df, 1), D(2, df, 0) - D(0, df, 2), D(0, df, 1) - D(1, df, 0)};
    }
    Vec3 grad(const std::array<double, 2>& df) const {
        Vec3 r;
        for (int i = 0; i < 3; ++i) {
            auto k = static_cast<std::size_t>(i);
            r[i] = d[k][0] * df[0] + d[k][1] * df[1];
        }
        return r;
    }
};

}  // namespace

DivCurl div_curl(const GaussData& g) {
    Ops top{g.e_top}, crs{g.e_cross};
    DivCurl dc;
    dc.div_top = top.div(g.dn);
    dc.div_cross = crs.div(g.dn);
    dc.curl_top = top.curl(g.dn);
    dc.curl_cross = crs.curl(g.dn);
    return dc;
}

double div_curl_residual(const DivCurl& dc, const GaussData& g, const ExtrinsicData& d) {
    double r = std::fabs(dc.div_top + d.H);
    r = std::max(r, std::fabs(dc.div_cross - d.star_tau));
    r = std::max(r, max_abs(dc.curl_top + d.star_tau * g.n));
    r = std::max(r, max_abs(dc.curl_cross + d.H * g.n));
    return r;
}

Mat2 weingarten_from_gauss(const SurfaceSample& s, const GaussData& g) {
    Mat2 W;
    for (int a = 0; a < 2; ++a) {
        Vec3 img{};
        for (int i = 0; i < 3; ++i) img = img - g.dn[static_cast<std::size_t>(a)][i] * s.jet.F.col(i);
        auto c = s.tangent_coords(img);
        W(0, a) = c[0];
        W(1, a) = c[1];
    }
    return W;
}

double sphere_area_density(const GaussData& g) { return dot(g.n, cross(g.dn[0], g.dn[1])); }

ConformalVerdict conformality(const SurfaceSample& s, const GaussData& g, double tol) {
    Mat2 Gn;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) Gn(a, b) = dot(g.dn[static_cast<std::size_t>(a)], g.dn[static_cast<std::size_t>(b)]);
    ConformalVerdict v;
    v.k = 0.5 * trace(s.Ginv * Gn);
    double scale = max_abs(Gn);
    v.residual = scale > 0.0 ? max_abs(Gn - v.k * s.G) / scale : 0.0;
    v.conformal = v.k > tol && v.residual <= tol;
    return v;
}

Ambient apply_gauge(const Ambient& a, const GaugeField& gauge, std::span<const Vec3> check_points) {
    const auto& F = a.frame();
    const auto& e = gauge.e;
    for (const Vec3& p : check_points) {
        Vec3 ev;
        for (int i = 0; i < 3; ++i) ev[i] = expr::eval(e[static_cast<std::size_t>(i)], p.c);
        if (std::fabs(norm(ev) - 1.0) > 1e-9) throw Error(Errc::NonUnitAxis, "gauge axis is not unit");
    }
    // Rodrigues matrix I + sinθ ê + (1 − cosθ) ê² built from expressions.
    Expr s = expr::sin(gauge.theta);
    Expr c1 = Expr(1.0) - expr::cos(gauge.theta);
    Ambient::Matrix K;
    K[0] = {Expr(), -e[2], e[1]};
    K[1] = {e[2], Expr(), -e[0]};
    K[2] = {-e[1], e[0], Expr()};
    Ambient::Matrix R;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Expr k2;
            for (int m = 0; m < 3; ++m) k2 = k2 + K[i][m] * K[m][j];
            R[i][j] = Expr(i == j ? 1.0 : 0.0) + s * K[i][j] + c1 * k2;
        }
    Ambient::Matrix Fp;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Expr sum;
            for (int m = 0; m < 3; ++m) sum = sum + F[i][m] * R[m][j];
            Fp[i][j] = sum;
        }
    return Ambient::from_frame(Fp, a.box());
}

Surface gauged_surface(const Surface& surf, const GaugeField& gauge) {
    auto amb = std::make_shared<const Ambient>(apply_gauge(surf.ambient(), gauge));
    return Surface(amb, surf.map(), surf.domain(), surf.declared_isothermal(), surf.closed());
}

namespace {

struct ChartFieldJet {
    double theta = 0.0;
    Vec3 e;
    std::array<double, 2> dtheta{};  // along X_u, X_v
    std::array<Vec3, 2> de;
};

ChartFieldJet restrict_gauge(const GaugeField& gauge, const SurfaceSample& s) {
    ChartFieldJet f;
    f.theta = expr::eval(gauge.theta, s.p.c);
    Vec3 grad_t;
    std::array<Vec3, 3> grad_e;
    for (int c = 0; c < 3; ++c) grad_t[c] = expr::eval(expr::diff(gauge.theta, c), s.p.c);
    for (int i = 0; i < 3; ++i) {
        auto ki = static_cast<std::size_t>(i);
        f.e[i] = expr::eval(gauge.e[ki], s.p.c);
        for (int c = 0; c < 3; ++c) grad_e[ki][c] = expr::eval(expr::diff(gauge.e[ki], c), s.p.c);
    }
    for (int a = 0; a < 2; ++a) {
        auto ka = static_cast<std::size_t>(a);
        f.dtheta[ka] = dot(grad_t, s.X[ka]);
        for (int i = 0; i < 3; ++i) f.de[ka][i] = dot(grad_e[static_cast<std::size_t>(i)], s.X[ka]);
    }
    return f;
}

}  // namespace

double gauge_theorem_residual_at(const Surface& surf, const Surface& gauged, const GaugeField& gauge, const UV& uv) {
    SurfaceSample s = surf.sample(uv[0], uv[1]);
    GaussData g = gauss_map(surf, s);
    Vec3 ev;
    for (int i = 0; i < 3; ++i) ev[i] = expr::eval(gauge.e[static_cast<std::size_t>(i)], s.p.c);
    if (max_abs(ev - g.n) > 1e-8) throw Error(Errc::AxisNotNormal, "gauge axis differs from the Gauss map");
    double th = expr::eval(gauge.theta, s.p.c);
    std::complex<double> H = extrinsic(s).bold_H;
    std::complex<double> Hg = extrinsic(gauged.sample(uv[0], uv[1])).bold_H;
    return std::abs(Hg - H * std::polar(1.0, th));
}

double general_gauge_residual_at(const Surface& surf, const Surface& gauged, const GaugeField& gauge, const UV& uv) {
    SurfaceSample s = surf.sample(uv[0], uv[1]);
    GaussData g = gauss_map(surf, s);
    ExtrinsicData d = extrinsic(s);
    ChartFieldJet f = restrict_gauge(gauge, s);
    if (std::fabs(norm(f.e) - 1.0) > 1e-9) throw Error(Errc::NonUnitAxis, "gauge axis is not unit on the surface");
    Ops top{g.e_top}, crs{g.e_cross};
    double st = std::sin(f.theta), ct = 1.0 - std::cos(f.theta);
    double H_pred = d.H - dot(f.e, crs.grad(f.dtheta)) - st * crs.div(f.de) + ct * dot(crs.curl(f.de), f.e);
    double T_pred = d.star_tau - dot(f.e, top.grad(f.dtheta)) - st * top.div(f.de) + ct * dot(top.curl(f.de), f.e);
    ExtrinsicData dg = extrinsic(gauged.sample(uv[0], uv[1]));
    return std::max(std::fabs(dg.H - H_pred), std::fabs(dg.star_tau - T_pred));
}

double gauge_theorem_residual(const Surface& surf, const GaugeField& gauge, std::span<const UV> points) {
    Surface gs = gauged_surface(surf, gauge);
    double worst = 0.0;
    for (const UV& uv : points) worst = std::max(worst, gauge_theorem_residual_at(surf, gs, gauge, uv));
    return worst;
}

double general_gauge_residual(const Surface& surf, const GaugeField& gauge, std::span<const UV> points) {
    Surface gs = gauged_surface(surf, gauge);
    double worst = 0.0;
    for (const UV& uv : points) worst = std::max(worst, general_gauge_residual_at(surf, gs, gauge, uv));
    return worst;
}

DegreeResult gauss_degree(const Surface& surf, int nu, int nv) {
    const Domain& dom = surf.domain();
    if (!(surf.closed() || (dom.periodic[0] && dom.periodic[1])))
        throw Error(Errc::NotClosed, "degree needs a closed surface chart");
    AxisRule ru = quadrature_axis(dom.lo[0], dom.hi[0], nu, dom.periodic[0]);
    AxisRule rv = quadrature_axis(dom.lo[1], dom.hi[1], nv, dom.periodic[1]);
    std::vector<double> terms;
    terms.reserve(ru.nodes.size() * rv.nodes.size());
    for (std::size_t i = 0; i < ru.nodes.size(); ++i)
        for (std::size_t k = 0; k < rv.nodes.size(); ++k) {
            SurfaceSample s = surf.sample(ru.nodes[i], rv.nodes[k]);
            terms.push_back(ru.weights[i] * rv.weights[k] * sphere_area_density(gauss_map(surf, s)));
        }
    DegreeResult r;
    r.raw = pairwise_sum(terms) / (4.0 * std::numbers::pi);
    r.degree = std::lround(r.raw);
    r.residual = std::fabs(r.raw - static_cast<double>(r.degree));
    return r;
}

}  // namespace rcsurf
