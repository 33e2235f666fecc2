#include "rcsurf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>

#include "rcsurf/errors.hpp"
#include "rcsurf/grid.hpp"
#include "rcsurf/scene.hpp"
#include "rcsurf/verify.hpp"

namespace rcsurf {

namespace {

struct SceneArgs {
    std::string scene_path;
    std::string builtin_name;
    std::vector<std::string> params;
    std::string grid;
    int jobs = 1;
};

void add_scene_options(CLI::App* cmd, SceneArgs& a, const std::string& default_grid) {
    auto* s = cmd->add_option("--scene", a.scene_path, "scene file (.rcscene)");
    auto* b = cmd->add_option("--builtin", a.builtin_name, "builtin scene name");
    s->excludes(b);
    cmd->add_option("--param", a.params, "parameter override k=v (repeatable)");
    a.grid = default_grid;
    cmd->add_option("--grid", a.grid, "resolution NxM")->capture_default_str();
    cmd->add_option("--jobs", a.jobs, "worker threads (0: all cores)")->capture_default_str();
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> out;
    for (const auto& p : raw) {
        auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw Error(Errc::ConfigError, "--param expects k=v, got " + p);
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

Scene resolve_scene(const SceneArgs& a) {
    auto params = parse_params(a.params);
    if (!a.builtin_name.empty()) return builtin(a.builtin_name, params);
    if (a.scene_path.empty()) throw Error(Errc::ConfigError, "one of --scene or --builtin is required");
    SceneSpec spec = load_scene_spec(a.scene_path);
    for (const auto& [k, v] : params) {
        auto it = std::find_if(spec.parameters.begin(), spec.parameters.end(),
                               [&](const auto& p) { return p.first == k; });
        if (it == spec.parameters.end()) throw Error(Errc::ConfigError, "scene has no parameter " + k);
        it->second = v;
        spec.locations.erase("parameters." + k);
    }
    return build_scene(spec);
}

std::pair<int, int> parse_grid(const std::string& g, int min) {
    static const std::regex re(R"((\d+)x(\d+))");
    std::smatch m;
    if (!std::regex_match(g, m, re)) throw Error(Errc::ConfigError, "--grid expects NxM, got " + g);
    int nu = std::stoi(m[1]), nv = std::stoi(m[2]);
    if (nu < min || nv < min)
        throw Error(Errc::ConfigError, "grid resolution must be at least " + std::to_string(min) + " per axis");
    return {nu, nv};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
    o << text;
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Surfaces in Riemann-Cartan 3-manifolds: verification and field export", "rcsurf"};
    app.require_subcommand(1);

    SceneArgs va, fa, ia;
    std::string tol = "analytic", suites, report_out, fields_out, field;

    auto* verify_cmd = app.add_subcommand("verify", "run verification suites and write a JSON report");
    add_scene_options(verify_cmd, va, "64x64");
    verify_cmd->add_option("--tol", tol, "analytic, strict or a number")->capture_default_str();
    verify_cmd->add_option("--suite", suites, "comma-separated suite names (default: all)");
    verify_cmd->add_option("--out", report_out, "report path (default: stdout)");

    auto* fields_cmd = app.add_subcommand("fields", "export per-sample fields as CSV");
    add_scene_options(fields_cmd, fa, "32x32");
    fields_cmd->add_option("--out", fields_out, "output path (default: stdout)");

    auto* integrate_cmd = app.add_subcommand("integrate", "integrate a field against the area form");
    add_scene_options(integrate_cmd, ia, "64x64");
    integrate_cmd->add_option("--field", field, "area, K, K_e, H, star_tau, abs_H, gauss_area")->required();

    app.add_subcommand("list", "list builtin scenes");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify_cmd->parsed()) {
            auto [nu, nv] = parse_grid(va.grid, 8);
            VerifyOptions opt;
            opt.grid.nu = nu;
            opt.grid.nv = nv;
            opt.grid.jobs = va.jobs;
            opt.tier = parse_tier(tol);
            opt.grid.classify_tol = opt.tier.exact;
            opt.suites = split_csv(suites);
            for (const auto& s : opt.suites)
                if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
                    throw Error(Errc::ConfigError, "unknown suite " + s);
            Scene scene = resolve_scene(va);
            Report rep = verify(scene, opt);
            std::string json = rep.to_json();
            if (report_out.empty()) {
                out << json;
            } else {
                write_file(report_out, json);
                for (const auto& s : rep.suites)
                    out << s.name << " " << s.status << " max=" << fmt(s.max_residual) << " tol=" << fmt(s.tolerance)
                        << "\n";
            }
            if (!rep.passed()) {
                err << "verification failed\n";
                return 1;
            }
            return 0;
        }
        if (fields_cmd->parsed()) {
            auto [nu, nv] = parse_grid(fa.grid, 8);
            Scene scene = resolve_scene(fa);
            GridOptions opt;
            opt.nu = nu;
            opt.nv = nv;
            opt.jobs = fa.jobs;
            SampleGrid grid = SampleGrid::build(scene, opt);
            if (fields_out.empty()) out << fields_table(grid);
            else export_fields(grid, fields_out);
            return 0;
        }
        if (integrate_cmd->parsed()) {
            auto [nu, nv] = parse_grid(ia.grid, 8);
            Scene scene = resolve_scene(ia);
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", integrate(scene, field, nu, nv, ia.jobs));
            out << buf << "\n";
            return 0;
        }
        for (const auto& b : list_builtins()) {
            out << b.name << "  " << b.summary;
            if (!b.parameters.empty()) {
                out << "  [";
                for (std::size_t i = 0; i < b.parameters.size(); ++i)
                    out << (i ? ", " : "") << b.parameters[i].first << "=" << b.parameters[i].second;
                out << "]";
            }
            out << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace rcsurf
