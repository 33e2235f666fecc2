#include "rcsurf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"
#include "rcsurf/errors.hpp"
#include "rcsurf/holo.hpp"

namespace rcsurf {

using expr::Expr;

ToleranceTier parse_tier(const std::string& text) {
    ToleranceTier t;
    if (text == "analytic") return t;
    if (text == "strict") {
        t.name = "strict";
        t.exact = 1e-8;
        t.fd = 1e-6;
        t.global = 1e-4;
        return t;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(v > 0.0) || !std::isfinite(v))
        throw Error(Errc::ConfigError, "tolerance must be analytic, strict or a positive number: " + text);
    t.name = text;
    t.exact = t.fd = t.global = v;
    return t;
}

bool Report::passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

const SuiteResult* Report::find(const std::string& name) const {
    for (const auto& s : suites)
        if (s.name == name) return &s;
    return nullptr;
}

std::string Report::to_json() const {
    using nlohmann::ordered_json;
    auto num = [](double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); };
    ordered_json j;
    j["scene"] = scene;
    j["grid"] = {nu, nv};
    j["tier"] = tier;
    j["pass"] = passed();
    ordered_json arr = ordered_json::array();
    for (const auto& s : suites) {
        ordered_json o;
        o["name"] = s.name;
        o["status"] = s.status;
        o["pass"] = s.passed();
        o["max_residual"] = num(s.max_residual);
        o["mean_residual"] = num(s.mean_residual);
        o["tolerance"] = num(s.tolerance);
        o["samples"] = s.samples;
        o["disagreements"] = s.disagreements;
        if (!s.note.empty()) o["note"] = s.note;
        if (!s.details.empty()) {
            ordered_json d;
            for (const auto& [k, v] : s.details) d[k] = num(v);
            o["details"] = d;
        }
        arr.push_back(o);
    }
    j["suites"] = arr;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- random fields

double FieldSampler::uniform(double lo, double hi) {
    // the standard fixes mt19937_64's output but not the distributions
    std::uint64_t bits = gen_();
    return lo + (hi - lo) * static_cast<double>(bits >> 11) * 0x1p-53;
}

Expr FieldSampler::angle() {
    const Expr vars[3] = {Expr::variable(0, "x"), Expr::variable(1, "y"), Expr::variable(2, "z")};
    // draws are sequenced explicitly so the field does not depend on
    // argument evaluation order
    Expr t = uniform(-1.0, 1.0);
    for (int k = 0; k < 3; ++k) {
        double amp = uniform(-1.0, 1.0);
        double freq = uniform(0.5, 1.5);
        double phase = uniform(-3.0, 3.0);
        Expr arg = freq * vars[k] + phase;
        t = t + amp * (k == 1 ? expr::cos(arg) : expr::sin(arg));
    }
    double mix = uniform(-0.5, 0.5);
    return t + mix * vars[0] * vars[1];
}

std::array<Expr, 3> FieldSampler::unit_axis() {
    Expr a = angle();
    Expr b = angle();
    return {expr::sin(b) * expr::cos(a), expr::sin(b) * expr::sin(a), expr::cos(b)};
}

// ---------------------------------------------------------------- suites

namespace {

struct Acc {
    std::vector<double> values;
    void add(double x) { values.push_back(x); }
    void fill(SuiteResult& r, double tol) const {
        r.samples = values.size();
        r.tolerance = tol;
        r.max_residual = 0.0;
        for (double v : values) r.max_residual = std::max(r.max_residual, std::isnan(v) ? INFINITY : v);
        r.mean_residual = values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
        r.status = r.max_residual <= tol ? "pass" : "fail";
    }
};

SuiteResult named(const std::string& name) {
    SuiteResult r;
    r.name = name;
    return r;
}

SuiteResult skipped(const std::string& name, const std::string& why) {
    SuiteResult r = named(name);
    r.status = "skipped";
    r.note = why;
    r.max_residual = r.mean_residual = r.tolerance = std::numeric_limits<double>::quiet_NaN();
    return r;
}

struct Ctx {
    const Scene& scene;
    const SampleGrid& grid;
    const VerifyOptions& opt;

    double tol(const std::string& suite, double tier_value) const {
        auto it = scene.spec.tolerances.find(suite);
        return it != scene.spec.tolerances.end() ? it->second : tier_value;
    }
    bool frame() const { return scene.ambient->frame_defined(); }
    bool isothermal() const { return scene.surface->declared_isothermal(); }
    template <class F>
    void each_interior(F&& f) const {
        for (const auto& r : grid.records())
            if (r.interior()) f(r);
    }
};

SuiteResult ambient_sanity(const Ctx& c) {
    SuiteResult r = named("ambient_sanity");
    Acc a;
    for (const auto& s : c.grid.records()) a.add(s.ambient_sanity);
    a.fill(r, c.tol(r.name, c.opt.tier.exact));
    return r;
}

SuiteResult gauss_eq(const Ctx& c) {
    SuiteResult r = named("gauss_eq");
    Acc a;
    c.each_interior([&](const SampleRecord& s) { a.add(s.gauss_eq); });
    a.fill(r, c.tol(r.name, c.opt.tier.fd));
    return r;
}

SuiteResult egregium(const Ctx& c) {
    SuiteResult r = named("egregium");
    Acc a;
    double eg = 0.0, split = 0.0;
    std::size_t flat = 0;
    c.each_interior([&](const SampleRecord& s) {
        double v = s.sectional_split;
        split = std::max(split, v);
        if (!std::isnan(s.egregium)) {
            ++flat;
            eg = std::max(eg, s.egregium);
            v = std::max(v, s.egregium);
        }
        a.add(v);
    });
    a.fill(r, c.tol(r.name, c.opt.tier.fd));
    r.details = {{"sectional_split", split}, {"egregium", flat ? eg : std::numeric_limits<double>::quiet_NaN()}};
    if (flat == 0) r.note = "ambient not flat; sectional split only";
    return r;
}

SuiteResult weingarten_suite(const Ctx& c) {
    SuiteResult r = named("weingarten");
    Acc a;
    c.each_interior([&](const SampleRecord& s) {
        double v = s.weingarten;
        if (s.has_gauss) v = std::max(v, s.gauss_weingarten);
        a.add(v);
    });
    a.fill(r, c.tol(r.name, c.opt.tier.fd));
    return r;
}

SuiteResult divcurl(const Ctx& c) {
    if (!c.frame()) return skipped("divcurl", "needs a frame-defined ambient");
    SuiteResult r = named("divcurl");
    Acc a;
    c.each_interior([&](const SampleRecord& s) { a.add(s.divcurl); });
    a.fill(r, c.tol(r.name, c.opt.tier.exact));
    return r;
}

SuiteResult gauge(const Ctx& c) {
    if (!c.frame()) return skipped("gauge", "needs a frame-defined ambient");
    const Surface& S = *c.scene.surface;
    std::vector<UV> pts;
    c.each_interior([&](const SampleRecord& s) { pts.push_back({s.u, s.v}); });

    struct Job {
        GaugeField field;
        bool theorem;
    };
    std::vector<Job> jobs;
    FieldSampler rng(c.opt.seed);
    if (c.scene.normal_extension)
        for (int k = 0; k < 5; ++k) jobs.push_back({{rng.angle(), *c.scene.normal_extension}, true});
    for (int k = 0; k < 5; ++k) {
        Expr th = rng.angle();
        jobs.push_back({{th, rng.unit_axis()}, false});
    }
    if (c.scene.gauge) jobs.push_back({*c.scene.gauge, false});

    std::vector<Surface> gauged;
    for (const auto& j : jobs) gauged.push_back(gauged_surface(S, j.field));
    std::size_t np = pts.size();
    std::vector<double> res(jobs.size() * np);
    parallel_for(res.size(), c.opt.grid.jobs, [&](std::size_t k) {
        std::size_t g = k / np, p = k % np;
        const Job& j = jobs[g];
        res[k] = j.theorem ? gauge_theorem_residual_at(S, gauged[g], j.field, pts[p])
                           : general_gauge_residual_at(S, gauged[g], j.field, pts[p]);
    });

    SuiteResult r = named("gauge");
    Acc a;
    double thm = 0.0, gen = 0.0;
    for (std::size_t k = 0; k < res.size(); ++k) {
        a.add(res[k]);
        (jobs[k / np].theorem ? thm : gen) = std::max(jobs[k / np].theorem ? thm : gen, res[k]);
    }
    a.fill(r, c.tol(r.name, c.opt.tier.exact));
    if (c.scene.normal_extension) r.details.emplace_back("theorem", thm);
    else r.note = "no normal extension; general transformation only";
    r.details.emplace_back("general", gen);
    return r;
}

SuiteResult psi_identity(const Ctx& c) {
    if (!c.isothermal()) return skipped("psi_identity", "chart not declared isothermal");
    SuiteResult r = named("psi_identity");
    Acc a;
    double ctol = c.opt.grid.classify_tol;
    double max_psi = 0.0, max_phi = 0.0, max_H = 0.0;
    bool nowhere_geodesic = true;
    c.each_interior([&](const SampleRecord& s) {
        a.add(std::max(s.psi_residual, s.bold_h_paths));
        // |φ| = (λ²/4)|(W11 − W22) − i(W12 + W21)| in an orthonormal frame
        bool phi_zero = 2.0 * std::abs(s.phi) / s.area <= ctol;
        if (phi_zero != ((s.flags & kUmbilic) != 0)) ++r.disagreements;
        max_psi = std::max(max_psi, std::abs(s.psi));
        max_phi = std::max(max_phi, std::abs(s.phi));
        max_H = std::max(max_H, std::abs(s.d.bold_H));
        if (s.flags & kGeodesic) nowhere_geodesic = false;
    });
    double t = c.tol(r.name, c.opt.tier.exact);
    a.fill(r, t);
    if (nowhere_geodesic && max_psi <= t && !(max_H <= t || max_phi <= t)) {
        ++r.disagreements;
        r.note = "psi vanishes but neither H nor phi does";
    }
    if (r.disagreements) r.status = "fail";
    r.details = {{"max_abs_psi", max_psi}, {"max_abs_phi", max_phi}, {"max_abs_H", max_H}};
    return r;
}

SuiteResult hopf_identity(const Ctx& c) {
    if (!c.isothermal()) return skipped("hopf_identity", "chart not declared isothermal");
    const Surface& S = *c.scene.surface;
    ComplexGrid phi = c.grid.complex_field([](const SampleRecord& s) { return s.phi; });
    ComplexGrid H = c.grid.complex_field([](const SampleRecord& s) { return s.d.bold_H; });
    std::vector<const SampleRecord*> nodes;
    c.each_interior([&](const SampleRecord& s) { nodes.push_back(&s); });
    std::vector<double> res(nodes.size()), crH(nodes.size()), crP(nodes.size());
    parallel_for(nodes.size(), c.opt.grid.jobs, [&](std::size_t k) {
        const SampleRecord& s = *nodes[k];
        res[k] = hopf_identity(S, phi, H, s.u, s.v, s.i, s.j).residual;
        crH[k] = std::abs(dzbar(H, s.i, s.j));
        crP[k] = std::abs(dzbar(phi, s.i, s.j));
    });
    SuiteResult r = named("hopf_identity");
    Acc a;
    for (double x : res) a.add(x);
    double t = c.tol(r.name, c.opt.tier.fd);
    a.fill(r, t);
    double L = 0.0, mh = 0.0, mp = 0.0;
    for (const auto* s : nodes) L = std::max(L, max_abs(s->L));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        mh = std::max(mh, crH[k]);
        mp = std::max(mp, crP[k]);
    }
    if (L <= c.opt.tier.exact && (mh <= t) != (mp <= t)) {
        ++r.disagreements;
        r.status = "fail";
        r.note = "L vanishes but only one of H, phi is holomorphic";
    }
    r.details = {{"max_abs_L", L}, {"cr_residual_H", mh}, {"cr_residual_phi", mp}};
    return r;
}

SuiteResult conformality_suite(const Ctx& c) {
    if (!c.frame()) return skipped("conformality", "needs a frame-defined ambient");
    SuiteResult r = named("conformality");
    std::size_t n = 0, conformal = 0;
    c.each_interior([&](const SampleRecord& s) {
        ++n;
        bool predicted = !(s.flags & kGeodesic) && ((s.flags & kMinimal) || (s.flags & kUmbilic));
        bool got = (s.flags & kConformal) != 0;
        if (got) ++conformal;
        if (predicted != got) ++r.disagreements;
    });
    r.samples = n;
    r.tolerance = 0.0;
    r.max_residual = r.mean_residual = n ? static_cast<double>(r.disagreements) / static_cast<double>(n) : 0.0;
    r.status = r.disagreements == 0 ? "pass" : "fail";
    r.note = "classifier agreement, residual is the disagreeing fraction";
    r.details = {{"conformal_fraction", n ? static_cast<double>(conformal) / static_cast<double>(n) : 0.0}};
    return r;
}

SuiteResult gauss_bonnet(const Ctx& c) {
    const Surface& S = *c.scene.surface;
    if (!S.closed()) return skipped("gauss_bonnet", "surface not closed");
    double target;
    if (c.scene.spec.euler_characteristic)
        target = 2.0 * std::numbers::pi * *c.scene.spec.euler_characteristic;
    else if (const Golden* g = c.scene.golden("integral_K"))
        target = eval_golden(*g, 0.0, 0.0, Vec3{});
    else
        return skipped("gauss_bonnet", "no Euler characteristic declared");
    double value = integrate(c.scene, "K", c.grid.nu(), c.grid.nv(), c.opt.grid.jobs);
    SuiteResult r = named("gauss_bonnet");
    Acc a;
    a.add(std::fabs(value - target) / std::max(std::fabs(target), 2.0 * std::numbers::pi));
    a.fill(r, c.tol(r.name, c.opt.tier.global));
    r.details = {{"integral_K", value}, {"target", target}};
    return r;
}

SuiteResult degree(const Ctx& c) {
    if (!c.frame()) return skipped("degree", "needs a frame-defined ambient");
    const Surface& S = *c.scene.surface;
    if (!S.closed()) return skipped("degree", "surface not closed");
    DegreeResult d = gauss_degree(S, c.grid.nu(), c.grid.nv());
    SuiteResult r = named("degree");
    Acc a;
    a.add(d.residual);
    a.fill(r, c.tol(r.name, c.opt.tier.global));
    if (auto chi = c.scene.spec.euler_characteristic; chi && 2 * d.degree != *chi) {
        ++r.disagreements;
        r.status = "fail";
        r.note = "2 deg differs from the Euler characteristic";
    }
    r.details = {{"degree", static_cast<double>(d.degree)}, {"raw", d.raw}};
    return r;
}

SuiteResult goldens(const Ctx& c) {
    if (c.scene.goldens.empty()) return skipped("goldens", "scene has no goldens");
    SuiteResult r = named("goldens");
    r.tolerance = 1.0;
    r.note = "residuals relative to each key's tolerance";
    auto over = c.scene.spec.tolerances.find("goldens");
    auto key_tol = [&](double tier) { return over != c.scene.spec.tolerances.end() ? over->second : tier; };
    Acc a;
    std::vector<std::string> unchecked;
    for (const Golden& g : c.scene.goldens) {
        const std::string& k = g.key;
        double res = 0.0, t = key_tol(c.opt.tier.exact);
        bool done = true;
        if (k == "integral_K" || k == "area") {
            double target = eval_golden(g, 0.0, 0.0, Vec3{});
            double val = integrate(c.scene, k == "area" ? "area" : "K", c.grid.nu(), c.grid.nv(), c.opt.grid.jobs);
            res = std::fabs(val - target) / std::max(std::fabs(target), 1.0);
            t = key_tol(c.opt.tier.global);
        } else if (k == "degree") {
            if (!c.frame() || !c.scene.surface->closed()) {
                done = false;
            } else {
                DegreeResult d = gauss_degree(*c.scene.surface, c.grid.nu(), c.grid.nv());
                res = std::fabs(d.raw - eval_golden(g, 0.0, 0.0, Vec3{}));
                t = key_tol(c.opt.tier.global);
            }
        } else {
            if (k == "K") t = key_tol(c.opt.tier.fd);
            c.each_interior([&](const SampleRecord& s) {
                double got;
                const ExtrinsicData& d = s.d;
                if (k == "H") got = d.H;
                else if (k == "star_tau") got = d.star_tau;
                else if (k == "K_e") got = d.K_e;
                else if (k == "K") got = s.K;
                else if (k == "W_on_00") got = d.W_on(0, 0);
                else if (k == "W_on_01") got = d.W_on(0, 1);
                else if (k == "W_on_10") got = d.W_on(1, 0);
                else if (k == "W_on_11") got = d.W_on(1, 1);
                else if (k == "sectional") got = s.ambient_sectional;
                else if (k == "phi_re" && s.has_holo) got = s.phi.real();
                else if (k == "phi_im" && s.has_holo) got = s.phi.imag();
                else if (k == "n_1" && s.has_gauss) got = s.n[0];
                else if (k == "n_2" && s.has_gauss) got = s.n[1];
                else if (k == "n_3" && s.has_gauss) got = s.n[2];
                else if (k == "k_conformal" && s.has_gauss) got = s.conformal.k;
                else {
                    done = false;
                    return;
                }
                double e = std::fabs(got - eval_golden(g, s.u, s.v, s.p));
                res = std::max(res, std::isnan(e) ? INFINITY : e);
            });
        }
        if (!done) {
            unchecked.push_back(k);
            continue;
        }
        r.details.emplace_back(k, res);
        a.add(res / t);
    }
    a.fill(r, 1.0);
    if (!unchecked.empty()) {
        r.note += "; not applicable:";
        for (const auto& k : unchecked) r.note += " " + k;
    }
    return r;
}

}  // namespace

Report verify(const Scene& scene, const SampleGrid& grid, const VerifyOptions& opt) {
    for (const auto& s : opt.suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw Error(Errc::ConfigError, "unknown suite " + s);
    Ctx c{scene, grid, opt};
    Report rep;
    rep.scene = scene.spec.name;
    rep.nu = grid.nu();
    rep.nv = grid.nv();
    rep.tier = opt.tier.name;
    using Fn = SuiteResult (*)(const Ctx&);
    const std::pair<const char*, Fn> table[] = {
        {"ambient_sanity", ambient_sanity}, {"gauss_eq", gauss_eq},
        {"egregium", egregium},             {"weingarten", weingarten_suite},
        {"divcurl", divcurl},               {"gauge", gauge},
        {"psi_identity", psi_identity},     {"hopf_identity", hopf_identity},
        {"conformality", conformality_suite}, {"gauss_bonnet", gauss_bonnet},
        {"degree", degree},                 {"goldens", goldens},
    };
    for (const auto& [name, fn] : table) {
        bool wanted = opt.suites.empty() || std::find(opt.suites.begin(), opt.suites.end(), name) != opt.suites.end();
        if (wanted) rep.suites.push_back(fn(c));
    }
    return rep;
}

Report verify(const Scene& scene, const VerifyOptions& opt) {
    SampleGrid grid = SampleGrid::build(scene, opt.grid);
    return verify(scene, grid, opt);
}

}  // namespace rcsurf
