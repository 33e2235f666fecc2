#include "rcsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rcsurf/errors.hpp"
#include "rcsurf/holo.hpp"

namespace rcsurf {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));
    std::mutex m;
    std::size_t bad = n;
    std::exception_ptr err;
    auto work = [&](std::size_t w) {
        for (std::size_t k = w; k < n; k += workers) {
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (k < bad) {
                    bad = k;
                    err = std::current_exception();
                }
                return;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
}

namespace {

double ambient_sanity(const AmbientJet& j, const AmbientTensors& t) {
    double r = metric_compat_residual(j);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    auto at = [&](int p, int q, int s, int w) { return t.Rlow[static_cast<std::size_t>(ridx(p, q, s, w))]; };
                    r = std::max(r, std::fabs(at(a, b, c, d) + at(b, a, c, d)));
                    r = std::max(r, std::fabs(at(a, b, c, d) + at(a, b, d, c)));
                    r = std::max(r, std::fabs(t.T[static_cast<std::size_t>(gidx(a, b, c))] +
                                              t.T[static_cast<std::size_t>(gidx(a, c, b))]));
                }
    if (j.has_frame) {
        r = std::max(r, max_abs(transpose(j.F) * j.g * j.F - Mat3::identity()));
        for (double x : t.R) r = std::max(r, std::fabs(x));
    }
    return r;
}

SampleRecord compute_record(const Scene& sc, const GridOptions& opt, SampleRecord r) {
    const Surface& S = *sc.surface;
    SurfaceSample s = S.sample(r.u, r.v);
    r.p = s.p;
    r.area = s.area;
    r.d = extrinsic(s);
    if (s.area < 1e-6) {
        r.flags |= kMasked;
        r.flags &= ~static_cast<std::uint32_t>(kInterior);
    }

    AmbientJet j2 = S.ambient().jet(s.p, 2);
    AmbientTensors t = tensors(j2);
    SurfaceCurvature scv = surface_curvature(S, r.u, r.v, true);
    r.K = scv.K;
    r.gauss_eq = gauss_equation_residual(s, t, scv);
    CurvatureDecomposition cd = curvature_decomposition(s, r.d, t, r.K);
    r.sectional_split = cd.sectional_split;
    r.ambient_sectional = cd.ambient_sectional;
    if (cd.egregium) r.egregium = *cd.egregium;
    r.weingarten = weingarten(S, r.u, r.v).cross_check_residual;
    r.ambient_sanity = ambient_sanity(j2, t);

    Classification c = classify(r.d, opt.classify_tol);
    if (c.umbilic) r.flags |= kUmbilic;
    if (c.minimal_point) r.flags |= kMinimal;
    if (c.geodesic_point) r.flags |= kGeodesic;

    if (S.ambient().frame_defined()) {
        GaussData g = gauss_map(S, s);
        r.has_gauss = true;
        r.n = g.n;
        r.divcurl = div_curl_residual(div_curl(g), g, r.d);
        r.gauss_weingarten = max_abs(r.d.W - weingarten_from_gauss(s, g));
        r.conformal = conformality(s, g, opt.classify_tol);
        if (r.conformal.conformal) r.flags |= kConformal;
    }
    if (S.declared_isothermal()) {
        r.has_holo = true;
        r.phi = phi_coeff(s);
        PsiResult pr = psi_coeff(s);
        r.psi = pr.psi;
        r.psi_residual = pr.identity_residual;
        r.bold_h_paths = std::abs(bold_h_isothermal(s) - r.d.bold_H);
        r.L = l_tensor(s, t);
    }
    return r;
}

}  // namespace

SampleGrid SampleGrid::build(const Scene& scene, const GridOptions& opt) {
    if (opt.nu < 1 || opt.nv < 1) throw Error(Errc::ConfigError, "grid resolution must be positive");
    const Domain& dom = scene.surface->domain();
    SampleGrid g;
    g.nu_ = opt.nu;
    g.nv_ = opt.nv;
    g.du_ = dom.extent(0) / opt.nu;
    g.dv_ = dom.extent(1) / opt.nv;
    g.periodic_u_ = dom.periodic[0];
    g.periodic_v_ = dom.periodic[1];
    AxisRule au = uniform_axis(dom.lo[0], dom.hi[0], opt.nu, dom.periodic[0]);
    AxisRule av = uniform_axis(dom.lo[1], dom.hi[1], opt.nv, dom.periodic[1]);
    g.records_.resize(static_cast<std::size_t>(opt.nu) * static_cast<std::size_t>(opt.nv));
    parallel_for(g.records_.size(), opt.jobs, [&](std::size_t k) {
        SampleRecord r;
        r.i = static_cast<int>(k / static_cast<std::size_t>(opt.nv));
        r.j = static_cast<int>(k % static_cast<std::size_t>(opt.nv));
        r.u = au.nodes[static_cast<std::size_t>(r.i)];
        r.v = av.nodes[static_cast<std::size_t>(r.j)];
        bool in_u = dom.periodic[0] || (r.i >= 2 && r.i < opt.nu - 2);
        bool in_v = dom.periodic[1] || (r.j >= 2 && r.j < opt.nv - 2);
        if (in_u && in_v) r.flags |= kInterior;
        g.records_[k] = compute_record(scene, opt, r);
    });
    return g;
}

ComplexGrid SampleGrid::complex_field(const std::function<std::complex<double>(const SampleRecord&)>& f) const {
    ComplexGrid c;
    c.nu = nu_;
    c.nv = nv_;
    c.du = du_;
    c.dv = dv_;
    c.periodic_u = periodic_u_;
    c.periodic_v = periodic_v_;
    c.values.reserve(records_.size());
    for (const auto& r : records_) c.values.push_back(f(r));
    return c;
}

// ---------------------------------------------------------------- integration

const std::vector<std::string>& integrable_fields() {
    static const std::vector<std::string> f{"area", "K", "K_e", "H", "star_tau", "abs_H", "gauss_area"};
    return f;
}

double integrate(const Scene& scene, const std::string& field, int nu, int nv, int jobs) {
    const auto& names = integrable_fields();
    if (std::find(names.begin(), names.end(), field) == names.end())
        throw Error(Errc::UndefinedField, "no integrable field named " + field);
    const Surface& S = *scene.surface;
    if (field == "gauss_area" && !S.ambient().frame_defined())
        throw Error(Errc::UndefinedField, "gauss_area needs a frame-defined ambient");
    if (nu < 1 || nv < 1) throw Error(Errc::ConfigError, "grid resolution must be positive");
    const Domain& dom = S.domain();
    AxisRule ru = quadrature_axis(dom.lo[0], dom.hi[0], nu, dom.periodic[0]);
    AxisRule rv = quadrature_axis(dom.lo[1], dom.hi[1], nv, dom.periodic[1]);
    std::vector<double> terms(ru.nodes.size() * rv.nodes.size());
    parallel_for(terms.size(), jobs, [&](std::size_t k) {
        std::size_t i = k / rv.nodes.size(), j = k % rv.nodes.size();
        double u = ru.nodes[i], v = rv.nodes[j];
        SurfaceSample s = S.sample(u, v);
        double f = 0.0;
        if (field == "area") {
            f = 1.0;
        } else if (field == "K") {
            f = intrinsic_curvature(S, u, v);
        } else if (field == "gauss_area") {
            terms[k] = ru.weights[i] * rv.weights[j] * sphere_area_density(gauss_map(S, s));
            return;
        } else {
            ExtrinsicData d = extrinsic(s);
            if (field == "K_e") f = d.K_e;
            else if (field == "H") f = d.H;
            else if (field == "star_tau") f = d.star_tau;
            else f = std::abs(d.bold_H);
        }
        terms[k] = ru.weights[i] * rv.weights[j] * f * s.area;
    });
    return pairwise_sum(terms);
}

// ---------------------------------------------------------------- export

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string flag_text(std::uint32_t f) {
    static const std::pair<SampleFlag, const char*> names[] = {{kInterior, "interior"}, {kMasked, "masked"},
                                                               {kUmbilic, "umbilic"},   {kMinimal, "minimal"},
                                                               {kGeodesic, "geodesic"}, {kConformal, "conformal"}};
    std::string out;
    for (const auto& [bit, name] : names)
        if (f & bit) out += (out.empty() ? "" : "+") + std::string(name);
    return out.empty() ? "-" : out;
}

}  // namespace

std::string fields_table(const SampleGrid& grid) {
    std::string out = "u,v,p_x,p_y,p_z,H,star_tau,K_e,K_intrinsic,|phi|,|psi|,n_1,n_2,n_3,flags\n";
    for (const auto& r : grid.records()) {
        const double vals[] = {r.u,     r.v,        r.p[0],  r.p[1],
                               r.p[2],  r.d.H,      r.d.star_tau, r.d.K_e,
                               r.K,     r.has_holo ? std::abs(r.phi) : SampleRecord::nan,
                               r.has_holo ? std::abs(r.psi) : SampleRecord::nan,
                               r.n[0],  r.n[1],     r.n[2]};
        for (double x : vals) out += num(x) + ",";
        out += flag_text(r.flags) + "\n";
    }
    return out;
}

void export_fields(const SampleGrid& grid, const std::string& path) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
    o << fields_table(grid);
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
}

FieldTable read_fields(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    FieldTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) t.header = cells;
        else t.rows.push_back(cells);
        first = false;
    }
    return t;
}

}  // namespace rcsurf
