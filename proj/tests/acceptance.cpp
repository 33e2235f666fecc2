// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rcsurf/cli.hpp"
#include "rcsurf/grid.hpp"
#include "rcsurf/holo.hpp"
#include "rcsurf/scene.hpp"
#include "rcsurf/verify.hpp"
#include "support.hpp"

using namespace rcsurf;

namespace {

constexpr double pi = std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

struct Criterion {
    bool ok = true;
    std::vector<std::string> notes;

    void need(bool cond, const std::string& what, double value, double limit) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s=%.3e (<= %.0e)", what.c_str(), value, limit);
        notes.emplace_back(buf);
        if (!cond) ok = false;
    }
    void bound(const std::string& what, double value, double limit) { need(value <= limit, what, value, limit); }
    void fact(bool cond, const std::string& what) {
        notes.push_back(what + (cond ? "" : " [violated]"));
        if (!cond) ok = false;
    }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Criterion&)>& body) {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s (%.1fs)\n", id, c.ok ? "PASS" : "FAIL", title.c_str(), secs);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
}

SampleGrid grid_of(const Scene& s, int nu, int nv, int jobs = 1) {
    GridOptions opt;
    opt.nu = nu;
    opt.nv = nv;
    opt.jobs = jobs;
    return SampleGrid::build(s, opt);
}

template <class F>
void each_interior(const SampleGrid& g, F&& f) {
    for (const auto& r : g.records())
        if (r.interior() && !(r.flags & kMasked)) f(r);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Builtin 64x64 grids, shared by the per-sample criteria.
std::map<std::string, SampleGrid>& grids() {
    static std::map<std::string, SampleGrid> g;
    return g;
}

const SampleGrid& builtin_grid(const std::string& name) {
    auto it = grids().find(name);
    if (it == grids().end()) it = grids().emplace(name, grid_of(builtin(name), 64, 64)).first;
    return it->second;
}

// ---------------------------------------------------------------------------

void catenoid(Criterion& c) {
    auto t0 = std::chrono::steady_clock::now();
    Scene s = builtin("catenoid_frame_plane");
    SampleGrid g = grid_of(s, 64, 64);
    double maxH = 0, maxK = 0, maxW = 0, maxk = 0;
    bool all_conformal = true;
    for (const auto& r : g.records()) {
        double sv = sech(r.v);
        maxH = std::max(maxH, std::abs(r.d.bold_H));
        maxK = std::max(maxK, std::fabs(r.d.K_e + sv * sv));
        Mat2 want{{-sv, 0, 0, sv}};
        maxW = std::max({maxW, max_abs(r.d.W - want), max_abs(r.d.W_on - want)});
        if (r.interior()) {
            all_conformal = all_conformal && r.conformal.conformal;
            maxk = std::max(maxk, std::fabs(r.conformal.k - sv * sv));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.bound("max|H|", maxH, 1e-9);
    c.bound("max|K_e+sech^2|", maxK, 1e-9);
    c.bound("max|W-diag(-sech,sech)|", maxW, 1e-9);
    c.fact(all_conformal, "Gauss map conformal at every interior sample");
    c.bound("max|k-sech^2|", maxk, 1e-7);
    c.bound("seconds", secs, 5.0);
}

void cartan_schouten(Criterion& c) {
    for (double lambda : {0.0, 0.3, 1.0}) {
        char lam[32];
        std::snprintf(lam, sizeof lam, "%g", lambda);
        Scene s = builtin("cartan_schouten_sphere", {{"lambda", lam}});
        SampleGrid g = grid_of(s, 64, 64);
        double maxW = 0, maxH = 0, maxK = 0;
        Mat2 want{{-1, -lambda, lambda, -1}};
        for (const auto& r : g.records()) {
            maxW = std::max(maxW, max_abs(r.d.W_on - want));
            maxH = std::max(maxH, std::abs(r.d.bold_H - cplx(-2, 2 * lambda)));
        }
        each_interior(g, [&](const SampleRecord& r) { maxK = std::max(maxK, std::fabs(r.K - 1.0)); });
        double integral = integrate(s, "K", 96, 192);
        std::string tag = std::string(" lambda=") + lam;
        c.bound("max|W_on-ref|" + tag, maxW, 1e-8);
        c.bound("max|H-(-2+2 lambda i)|" + tag, maxH, 1e-8);
        c.bound("max|K-1| interior" + tag, maxK, 1e-4);
        c.bound("|intK-4pi|/4pi" + tag, std::fabs(integral - 4 * pi) / (4 * pi), 1e-3);
    }
}

void rotated_plane(Criterion& c) {
    Scene s = builtin("rotated_frame_plane", {{"theta", "x*y"}, {"e1", "-1"}, {"e2", "0"}, {"e3", "0"}});
    const SampleGrid& g = builtin_grid("rotated_frame_plane");
    double maxH = 0, maxPhi = 0, maxL = 0;
    for (const auto& r : g.records()) {
        maxH = std::max(maxH, std::abs(r.d.bold_H - cplx(r.u, r.v)));
        // θ_x = y, θ_y = x, e = (−1, 0, 0)
        double tx = r.v, ty = r.u, e1 = -1, e2 = 0;
        cplx phi = 0.25 * cplx(ty * e1 + tx * e2, tx * e1 - ty * e2);
        maxPhi = std::max(maxPhi, std::abs(r.phi - phi));
        maxL = std::max(maxL, max_abs(r.L));
    }
    ComplexGrid H = g.complex_field([](const SampleRecord& r) { return r.d.bold_H; });
    ComplexGrid phi = g.complex_field([](const SampleRecord& r) { return r.phi; });
    double maxCR = 0, maxHopf = 0;
    each_interior(g, [&](const SampleRecord& r) {
        maxCR = std::max(maxCR, std::abs(dzbar(H, r.i, r.j)));
        maxHopf = std::max(maxHopf, hopf_identity(*s.surface, phi, H, r.u, r.v, r.i, r.j).residual);
    });
    c.bound("max|H-(u+iv)|", maxH, 1e-8);
    c.bound("max CR residual of H", maxCR, 1e-6);
    c.bound("max|phi-closed form|", maxPhi, 1e-8);
    c.bound("max|L(d1,d2)|", maxL, 1e-8);
    c.bound("max Hopf identity residual", maxHopf, 1e-5);
}

std::vector<std::string> weitzenboeck_builtins() {
    std::vector<std::string> out;
    for (const auto& b : list_builtins())
        if (builtin(b.name).ambient->frame_defined()) out.push_back(b.name);
    return out;
}

void gauge(Criterion& c) {
    FieldSampler rng(0x6a0e5eedULL);
    for (const auto& name : weitzenboeck_builtins()) {
        Scene s = builtin(name);
        SampleGrid g = grid_of(s, 24, 24);
        std::vector<UV> pts;
        each_interior(g, [&](const SampleRecord& r) { pts.push_back({r.u, r.v}); });
        double thm = 0, gen = 0;
        for (int k = 0; k < 5; ++k) {
            GaugeField f{rng.angle(), *s.normal_extension};
            Surface gauged = gauged_surface(*s.surface, f);
            for (const auto& p : pts) thm = std::max(thm, gauge_theorem_residual_at(*s.surface, gauged, f, p));
        }
        for (int k = 0; k < 5; ++k) {
            expr::Expr th = rng.angle();
            GaugeField f{th, rng.unit_axis()};
            Surface gauged = gauged_surface(*s.surface, f);
            for (const auto& p : pts) gen = std::max(gen, general_gauge_residual_at(*s.surface, gauged, f, p));
        }
        c.bound(name + " theorem", thm, 1e-6);
        c.bound(name + " general", gen, 1e-5);
    }
}

void divcurl(Criterion& c) {
    for (const auto& name : weitzenboeck_builtins()) {
        double m = 0;
        std::size_t n = 0;
        each_interior(builtin_grid(name), [&](const SampleRecord& r) {
            m = std::max(m, r.divcurl);
            ++n;
        });
        c.bound(name + " (" + std::to_string(n) + " samples)", m, 1e-7);
    }
}

void gauss_equation(Criterion& c) {
    for (const auto& b : list_builtins()) {
        double ge = 0, eg = 0, split = 0;
        bool flat = true;
        each_interior(builtin_grid(b.name), [&](const SampleRecord& r) {
            ge = std::max(ge, r.gauss_eq);
            split = std::max(split, r.sectional_split);
            if (std::isnan(r.egregium)) flat = false;
            else eg = std::max(eg, r.egregium);
        });
        c.bound(b.name + " Gauss equation", ge, 1e-5);
        if (flat) c.bound(b.name + " Egregium", eg, 1e-4);
        if (b.name == "cartan_schouten_sphere") c.bound(b.name + " sectional split", split, 1e-4);
    }
}

void psi(Criterion& c) {
    for (const auto& b : list_builtins()) {
        Scene s = builtin(b.name);
        if (!s.surface->declared_isothermal()) continue;
        const SampleGrid& g = builtin_grid(b.name);
        VerifyOptions opt;
        opt.suites = {"psi_identity"};
        Report rep = verify(s, g, opt);
        double m = 0;
        std::size_t n = 0;
        each_interior(g, [&](const SampleRecord& r) {
            m = std::max(m, r.psi_residual);
            ++n;
        });
        const SuiteResult* sr = rep.find("psi_identity");
        c.bound(b.name + " |psi-H phi|", m, 1e-8);
        c.fact(sr && sr->disagreements == 0,
               b.name + " umbilic vs phi=0 agreement " + std::to_string(n - (sr ? sr->disagreements : n)) + "/" +
                   std::to_string(n));
    }
}

void degree(Criterion& c) {
    DegreeResult sphere = gauss_degree(*builtin("round_sphere_standard").surface, 64, 128);
    DegreeResult torus = gauss_degree(*builtin("torus_standard").surface, 64, 64);
    c.fact(sphere.degree == 1, "round sphere degree " + std::to_string(sphere.degree));
    c.bound("round sphere |raw-1|", sphere.residual, 1e-3);
    c.fact(torus.degree == 0, "torus degree " + std::to_string(torus.degree));
    c.bound("torus |raw|", torus.residual, 1e-3);
}

void kit(Criterion& c) {
    testkit::Rng rng(0x50335eedULL);
    const int trials = 1000;
    double alg = 0.0, fd = 0.0;
    for (int t = 0; t < trials; ++t) {
        Vec3 a = rng.vec(2.0), b = rng.vec(2.0), e = rng.unit();
        Mat3 A = hat(a), B = hat(b), E = hat(e);
        Mat3 R = rodrigues(rng.unit(), rng.uniform(-4, 4)).matrix();
        Mat3 S = hat(rng.vec(2.0));
        alg = std::max({alg, max_abs(A * b - (-1.0) * (B * a)), max_abs(A * b - cross(a, b)),
                        max_abs(unhat(A * B - B * A) - cross(a, b)), max_abs(A * B * A + dot(a, b) * A),
                        max_abs(E * E * E + E), max_abs(Mat3(hat(R * b)) - R * B * transpose(R)),
                        max_abs(Mat3(hat(S * b)) - (S * B - B * S)), std::fabs(dot(a, b) + 0.5 * trace(A * B))});
    }
    const expr::VarSet xyz{"x", "y", "z"};
    for (int t = 0; t < trials; ++t) {
        expr::Expr theta = expr::parse(rng.smooth("x", "y", "z"), xyz);
        expr::Expr p1 = expr::parse(rng.smooth("y", "z", "x"), xyz);
        expr::Expr p2 = expr::parse(rng.smooth("z", "x", "y"), xyz);
        std::array<expr::Expr, 3> e{expr::sin(p2) * expr::cos(p1), expr::sin(p2) * expr::sin(p1), expr::cos(p2)};
        std::array<double, 3> p{rng.uniform(), rng.uniform(), rng.uniform()};
        auto rot = [&](std::array<double, 3> q) {
            Vec3 ev{expr::eval(e[0], q), expr::eval(e[1], q), expr::eval(e[2], q)};
            return rodrigues(ev / norm(ev), expr::eval(theta, q)).matrix();
        };
        int d = t % 3;
        const double h = 1e-4;
        auto at = [&](double k) {
            auto q = p;
            q[static_cast<std::size_t>(d)] += k * h;
            return rot(q);
        };
        Mat3 dg = (1.0 / (12 * h)) * (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2));
        fd = std::max(fd, max_abs(Mat3(maurer_cartan_pullback(theta, e, d, p)) - transpose(rot(p)) * dg));
    }
    c.bound("hat identities, 1000 instances", alg, 1e-10);
    c.bound("pullback vs FD, 1000 instances", fd, 1e-6);
}

void determinism(Criterion& c) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "rcsurf_acceptance";
    fs::create_directories(dir);
    auto cli = [](std::vector<std::string> args) {
        std::ostringstream o, e;
        int code = run_cli(args, o, e);
        return std::make_pair(code, o.str());
    };
    for (const std::string name : {"cartan_schouten_sphere", "rotated_frame_plane", "torus_standard"}) {
        std::vector<std::string> texts;
        for (const char* jobs : {"1", "1", "4"}) {
            auto [code, out] = cli({"verify", "--builtin", name, "--grid", "32x32", "--jobs", jobs});
            texts.push_back(out);
        }
        c.fact(!texts[0].empty() && texts[0] == texts[1] && texts[1] == texts[2],
               name + " verify report identical for jobs 1, 1, 4");
        std::vector<std::string> files;
        for (const char* jobs : {"1", "1", "4"}) {
            fs::path p = dir / (name + "_" + std::to_string(files.size()) + ".csv");
            cli({"fields", "--builtin", name, "--grid", "32x32", "--jobs", jobs, "--out", p.string()});
            files.push_back(slurp(p));
        }
        c.fact(!files[0].empty() && files[0] == files[1] && files[1] == files[2],
               name + " field export identical for jobs 1, 1, 4");
    }
}

}  // namespace

int main() {
    report(1, "catenoid-frame plane", catenoid);
    report(2, "Cartan-Schouten sphere", cartan_schouten);
    report(3, "rotated-frame plane", rotated_plane);
    report(4, "gauge theorem and general gauge", gauge);
    report(5, "divergence/curl ladder", divcurl);
    report(6, "Gauss equation, Egregium, sectional split", gauss_equation);
    report(7, "psi = H phi and umbilic classifier", psi);
    report(8, "Gauss map degree", degree);
    report(9, "so(3) kit properties", kit);
    report(10, "determinism", determinism);
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
