#include "rcsurf/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rcsurf/errors.hpp"

namespace rcsurf {

using expr::Bindings;
using expr::Expr;
using expr::VarSet;

const expr::VarSet& golden_vars() {
    static const VarSet v{"u", "v", "x", "y", "z"};
    return v;
}

double eval_golden(const Golden& g, double u, double v, const Vec3& p) {
    const double vals[5] = {u, v, p[0], p[1], p[2]};
    return expr::eval(g.value, vals);
}

const std::vector<std::string>& golden_keys() {
    static const std::vector<std::string> k{"H",       "star_tau", "K_e",     "K",          "W_on_00",
                                            "W_on_01", "W_on_10",  "W_on_11", "phi_re",     "phi_im",
                                            "n_1",     "n_2",      "n_3",     "k_conformal", "sectional",
                                            "integral_K", "area",  "degree"};
    return k;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> s{"ambient_sanity", "gauss_eq",      "egregium",    "weingarten",
                                            "divcurl",        "gauge",         "psi_identity", "hopf_identity",
                                            "conformality",   "gauss_bonnet",  "degree",      "goldens"};
    return s;
}

const Golden* Scene::golden(const std::string& key) const {
    for (const Golden& g : goldens)
        if (g.key == key) return &g;
    return nullptr;
}

// ---------------------------------------------------------------- reading

namespace {

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Reader {
public:
    explicit Reader(SceneSpec& spec) : spec_(spec) {}

    std::string scalar(const YAML::Node& n, const std::string& path) {
        if (!n.IsDefined() || n.IsNull()) throw SceneFormatError(path, "required");
        if (!n.IsScalar()) throw SceneFormatError(path, "expected a scalar");
        SceneLocation loc;
        loc.line = n.Mark().line + 1;
        loc.column = n.Mark().column + 1 + (n.Tag() == "!" ? 1 : 0);
        spec_.locations[path] = loc;
        return n.Scalar();
    }

    bool boolean(const YAML::Node& n, const std::string& path, bool fallback) {
        if (!n.IsDefined() || n.IsNull()) return fallback;
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            throw SceneFormatError(path, "expected true or false");
        }
    }

    void sequence(const YAML::Node& n, const std::string& path, std::size_t len) {
        if (!n.IsDefined() || n.IsNull()) throw SceneFormatError(path, "required");
        if (!n.IsSequence() || n.size() != len)
            throw SceneFormatError(path, "expected a list of " + std::to_string(len));
    }

    Row3 row3(const YAML::Node& n, const std::string& path) {
        sequence(n, path, 3);
        Row3 r;
        for (std::size_t i = 0; i < 3; ++i) r[i] = scalar(n[i], idx(path, i));
        return r;
    }

    Text3x3 mat3(const YAML::Node& n, const std::string& path) {
        sequence(n, path, 3);
        Text3x3 m;
        for (std::size_t i = 0; i < 3; ++i) m[i] = row3(n[i], idx(path, i));
        return m;
    }

    std::vector<std::pair<std::string, std::string>> string_map(const YAML::Node& n, const std::string& path) {
        std::vector<std::pair<std::string, std::string>> out;
        if (!n.IsDefined() || n.IsNull()) return out;
        if (!n.IsMap()) throw SceneFormatError(path, "expected a mapping");
        for (auto it = n.begin(); it != n.end(); ++it) {
            std::string key = it->first.Scalar();
            out.emplace_back(key, scalar(it->second, path + "." + key));
        }
        return out;
    }

private:
    SceneSpec& spec_;
};

void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = n.begin(); it != n.end(); ++it) {
        std::string key = it->first.Scalar();
        bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw SceneFormatError(path.empty() ? key : path + "." + key, "unknown field");
    }
}

SceneSpec read_document(const YAML::Node& root) {
    SceneSpec s;
    Reader r(s);
    if (!root.IsMap()) throw SceneFormatError("<document>", "expected a mapping at top level");
    check_keys(root, "", {"name", "description", "parameters", "ambient", "surface", "gauge", "tolerances",
                          "goldens"});

    s.name = r.scalar(root["name"], "name");
    if (root["description"]) s.description = r.scalar(root["description"], "description");
    s.parameters = r.string_map(root["parameters"], "parameters");

    const YAML::Node amb = root["ambient"];
    if (!amb.IsDefined() || !amb.IsMap()) throw SceneFormatError("ambient", "required");
    check_keys(amb, "ambient", {"frame", "metric", "connection"});
    if (amb["frame"]) {
        if (amb["metric"] || amb["connection"])
            throw SceneFormatError("ambient", "give either frame or metric and connection");
        s.frame_defined = true;
        s.frame = r.mat3(amb["frame"], "ambient.frame");
    } else {
        s.frame_defined = false;
        s.metric = r.mat3(amb["metric"], "ambient.metric");
        r.sequence(amb["connection"], "ambient.connection", 3);
        for (std::size_t k = 0; k < 3; ++k) s.connection[k] = r.mat3(amb["connection"][k], idx("ambient.connection", k));
    }

    const YAML::Node surf = root["surface"];
    if (!surf.IsDefined() || !surf.IsMap()) throw SceneFormatError("surface", "required");
    check_keys(surf, "surface",
               {"X", "domain", "periodic", "isothermal", "closed", "euler_characteristic", "normal_extension"});
    s.X = r.row3(surf["X"], "surface.X");
    const YAML::Node dom = surf["domain"];
    if (!dom.IsDefined() || !dom.IsMap()) throw SceneFormatError("surface.domain", "required");
    check_keys(dom, "surface.domain", {"u", "v"});
    const char* axes[2] = {"u", "v"};
    for (std::size_t a = 0; a < 2; ++a) {
        std::string p = std::string("surface.domain.") + axes[a];
        r.sequence(dom[axes[a]], p, 2);
        for (std::size_t e = 0; e < 2; ++e) s.domain[a][e] = r.scalar(dom[axes[a]][e], idx(p, e));
    }
    if (surf["periodic"]) {
        r.sequence(surf["periodic"], "surface.periodic", 2);
        for (std::size_t a = 0; a < 2; ++a)
            s.periodic[a] = r.boolean(surf["periodic"][a], idx("surface.periodic", a), false);
    }
    s.isothermal = r.boolean(surf["isothermal"], "surface.isothermal", false);
    s.closed = r.boolean(surf["closed"], "surface.closed", false);
    if (surf["euler_characteristic"]) {
        try {
            s.euler_characteristic = surf["euler_characteristic"].as<int>();
        } catch (const YAML::Exception&) {
            throw SceneFormatError("surface.euler_characteristic", "expected an integer");
        }
    }
    if (surf["normal_extension"]) s.normal_extension = r.row3(surf["normal_extension"], "surface.normal_extension");

    if (const YAML::Node g = root["gauge"]; g.IsDefined() && !g.IsNull()) {
        if (!g.IsMap()) throw SceneFormatError("gauge", "expected a mapping");
        check_keys(g, "gauge", {"theta", "axis"});
        SceneSpec::Gauge gs;
        gs.theta = r.scalar(g["theta"], "gauge.theta");
        gs.axis = r.row3(g["axis"], "gauge.axis");
        s.gauge = gs;
    }

    if (const YAML::Node t = root["tolerances"]; t.IsDefined() && !t.IsNull()) {
        if (!t.IsMap()) throw SceneFormatError("tolerances", "expected a mapping");
        for (auto it = t.begin(); it != t.end(); ++it) {
            std::string key = it->first.Scalar();
            std::string path = "tolerances." + key;
            double v = 0.0;
            try {
                v = it->second.as<double>();
            } catch (const YAML::Exception&) {
                throw SceneFormatError(path, "expected a number");
            }
            s.tolerances[key] = v;
        }
    }
    s.goldens = r.string_map(root["goldens"], "goldens");
    return s;
}

}  // namespace

SceneSpec parse_scene_text(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw SceneFormatError("<document>", "line " + std::to_string(e.mark.line + 1) + ", column " +
                                                 std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    return read_document(root);
}

SceneSpec load_scene_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(Errc::IoError, "cannot read " + path);
    return parse_scene_text(ss.str());
}

// ---------------------------------------------------------------- writing

std::string scene_to_text(const SceneSpec& s) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    auto str = [&](const std::string& v) { out << YAML::DoubleQuoted << v; };
    auto row = [&](const Row3& r) {
        out << YAML::Flow << YAML::BeginSeq;
        for (const auto& x : r) str(x);
        out << YAML::EndSeq;
    };
    auto mat = [&](const Text3x3& m) {
        out << YAML::BeginSeq;
        for (const auto& r : m) row(r);
        out << YAML::EndSeq;
    };

    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value;
    str(s.name);
    if (!s.description.empty()) {
        out << YAML::Key << "description" << YAML::Value;
        str(s.description);
    }
    if (!s.parameters.empty()) {
        out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
        for (const auto& [k, v] : s.parameters) {
            out << YAML::Key << k << YAML::Value;
            str(v);
        }
        out << YAML::EndMap;
    }
    out << YAML::Key << "ambient" << YAML::Value << YAML::BeginMap;
    if (s.frame_defined) {
        out << YAML::Key << "frame" << YAML::Value;
        mat(s.frame);
    } else {
        out << YAML::Key << "metric" << YAML::Value;
        mat(s.metric);
        out << YAML::Key << "connection" << YAML::Value << YAML::BeginSeq;
        for (const auto& m : s.connection) mat(m);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;

    out << YAML::Key << "surface" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "X" << YAML::Value;
    row(s.X);
    out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
    const char* axes[2] = {"u", "v"};
    for (std::size_t a = 0; a < 2; ++a) {
        out << YAML::Key << axes[a] << YAML::Value << YAML::Flow << YAML::BeginSeq;
        str(s.domain[a][0]);
        str(s.domain[a][1]);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    out << YAML::Key << "periodic" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.periodic[0] << s.periodic[1]
        << YAML::EndSeq;
    out << YAML::Key << "isothermal" << YAML::Value << s.isothermal;
    out << YAML::Key << "closed" << YAML::Value << s.closed;
    if (s.euler_characteristic) out << YAML::Key << "euler_characteristic" << YAML::Value << *s.euler_characteristic;
    if (s.normal_extension) {
        out << YAML::Key << "normal_extension" << YAML::Value;
        row(*s.normal_extension);
    }
    out << YAML::EndMap;

    if (s.gauge) {
        out << YAML::Key << "gauge" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "theta" << YAML::Value;
        str(s.gauge->theta);
        out << YAML::Key << "axis" << YAML::Value;
        row(s.gauge->axis);
        out << YAML::EndMap;
    }
    if (!s.tolerances.empty()) {
        out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
        for (const auto& [k, v] : s.tolerances) out << YAML::Key << k << YAML::Value << v;
        out << YAML::EndMap;
    }
    if (!s.goldens.empty()) {
        out << YAML::Key << "goldens" << YAML::Value << YAML::BeginMap;
        for (const auto& [k, v] : s.goldens) {
            out << YAML::Key << k << YAML::Value;
            str(v);
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void save_scene(const SceneSpec& spec, const std::string& path) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
    o << scene_to_text(spec);
    if (!o) throw Error(Errc::IoError, "cannot write " + path);
}

// ---------------------------------------------------------------- building

namespace {

std::string strip_code(const Error& e) {
    std::string w = e.what();
    std::string prefix = std::string(errc_name(e.code())) + ": ";
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

class Builder {
public:
    explicit Builder(const SceneSpec& s) : s_(s) {}

    Expr parse(const std::string& path, const std::string& text, const VarSet& vars) const {
        SceneLocation loc;
        if (auto it = s_.locations.find(path); it != s_.locations.end()) loc = it->second;
        try {
            return expr::parse(text, vars, consts);
        } catch (const SyntaxError& e) {
            int line = e.line(), col = e.column();
            if (loc.line > 0) {
                if (line == 1) col += loc.column - 1;
                line += loc.line - 1;
            }
            throw SyntaxError(e.offset(), line, col, e.expected(), path + ": " + e.detail());
        } catch (const Error& e) {
            if (e.code() != Errc::UnknownVariable && e.code() != Errc::UnknownFunction) throw;
            std::string where = loc.line > 0 ? " (line " + std::to_string(loc.line) + ", column " +
                                                   std::to_string(loc.column) + ")"
                                             : "";
            throw Error(e.code(), path + where + ": " + strip_code(e));
        }
    }

    double constant(const std::string& path, const std::string& text) const {
        Expr e = parse(path, text, VarSet{});
        double v = expr::eval(e, std::span<const double>{});
        if (!std::isfinite(v)) throw SceneFormatError(path, "not a finite number");
        return v;
    }

    Bindings consts;

private:
    const SceneSpec& s_;
};

}  // namespace

Scene build_scene(const SceneSpec& spec) {
    Scene sc;
    sc.spec = spec;
    Builder b(spec);
    if (spec.name.empty()) throw SceneFormatError("name", "required");

    for (const auto& [k, v] : spec.parameters) {
        std::string path = "parameters." + k;
        bool clash = golden_vars().index_of(k).has_value() || k == "pi" || expr::func_from_name(k).has_value();
        if (clash || k.empty()) throw SceneFormatError(path, "reserved name");
        b.consts[k] = b.constant(path, v);
    }
    sc.parameters = b.consts;

    const VarSet& av = Ambient::vars();
    if (spec.frame_defined) {
        Ambient::Matrix F;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                F[i][j] = b.parse("ambient.frame[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                  spec.frame[i][j], av);
        sc.ambient = std::make_shared<const Ambient>(Ambient::from_frame(F));
    } else {
        Ambient::Matrix g;
        std::array<Expr, 27> gamma;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                g[i][j] = b.parse("ambient.metric[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                                  spec.metric[i][j], av);
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    gamma[static_cast<std::size_t>(gidx(static_cast<int>(k), static_cast<int>(i),
                                                        static_cast<int>(j)))] =
                        b.parse("ambient.connection[" + std::to_string(k) + "][" + std::to_string(i) + "][" +
                                    std::to_string(j) + "]",
                                spec.connection[k][i][j], av);
        sc.ambient = std::make_shared<const Ambient>(Ambient::from_coefficients(g, gamma));
    }

    std::array<Expr, 3> X;
    for (std::size_t i = 0; i < 3; ++i) X[i] = b.parse(idx("surface.X", i), spec.X[i], Surface::vars());
    Domain dom;
    const char* axes[2] = {"u", "v"};
    for (std::size_t a = 0; a < 2; ++a) {
        std::string p = std::string("surface.domain.") + axes[a];
        dom.lo[a] = b.constant(idx(p, 0), spec.domain[a][0]);
        dom.hi[a] = b.constant(idx(p, 1), spec.domain[a][1]);
        if (!(dom.lo[a] < dom.hi[a])) throw SceneFormatError(p, "lower bound must be below upper bound");
        dom.periodic[a] = spec.periodic[a];
    }
    bool closed = spec.closed || (spec.periodic[0] && spec.periodic[1]);
    if (spec.euler_characteristic && !closed)
        throw SceneFormatError("surface.euler_characteristic", "only meaningful for a closed surface");
    sc.surface = std::make_shared<const Surface>(sc.ambient, X, dom, spec.isothermal, closed);

    if (spec.normal_extension) {
        std::array<Expr, 3> n;
        for (std::size_t i = 0; i < 3; ++i)
            n[i] = b.parse(idx("surface.normal_extension", i), (*spec.normal_extension)[i], av);
        sc.normal_extension = n;
    }
    if (spec.gauge) {
        if (!spec.frame_defined) throw SceneFormatError("gauge", "needs a frame-defined ambient");
        GaugeField gf;
        gf.theta = b.parse("gauge.theta", spec.gauge->theta, av);
        for (std::size_t i = 0; i < 3; ++i) gf.e[i] = b.parse(idx("gauge.axis", i), spec.gauge->axis[i], av);
        sc.gauge = gf;
    }
    for (const auto& [k, v] : spec.tolerances) {
        std::string path = "tolerances." + k;
        if (std::find(suite_names().begin(), suite_names().end(), k) == suite_names().end())
            throw SceneFormatError(path, "unknown suite");
        if (!(v > 0.0) || !std::isfinite(v)) throw SceneFormatError(path, "must be positive");
    }
    for (const auto& [k, v] : spec.goldens) {
        std::string path = "goldens." + k;
        if (std::find(golden_keys().begin(), golden_keys().end(), k) == golden_keys().end())
            throw SceneFormatError(path, "unknown golden key");
        sc.goldens.push_back({k, b.parse(path, v, golden_vars())});
    }

    sc.surface->validate(7);
    return sc;
}

Scene load_scene(const std::string& path) { return build_scene(load_scene_spec(path)); }

// ---------------------------------------------------------------- builtins

namespace {

using Params = std::map<std::string, std::string>;

Text3x3 identity_text() { return {{{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}}; }

void sphere_surface(SceneSpec& s) {
    s.X = {"sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"};
    s.domain = {{{"0", "pi"}, {"0", "2*pi"}}};
    s.periodic = {false, true};
    s.closed = true;
    s.euler_characteristic = 2;
}

SceneSpec euclidean_plane(const Params&) {
    SceneSpec s;
    s.name = "euclidean_plane";
    s.description = "unit square in the plane z = 0 of Euclidean space";
    s.frame = identity_text();
    s.X = {"u", "v", "0"};
    s.domain = {{{"0", "1"}, {"0", "1"}}};
    s.isothermal = true;
    s.normal_extension = Row3{"0", "0", "1"};
    s.goldens = {{"H", "0"},      {"star_tau", "0"}, {"K_e", "0"},     {"K", "0"},   {"W_on_00", "0"},
                 {"W_on_01", "0"}, {"W_on_10", "0"},  {"W_on_11", "0"}, {"phi_re", "0"}, {"phi_im", "0"},
                 {"n_1", "0"},    {"n_2", "0"},      {"n_3", "1"},     {"k_conformal", "0"},
                 {"sectional", "0"}, {"area", "1"}};
    return s;
}

SceneSpec catenoid_frame_plane(const Params&) {
    SceneSpec s;
    s.name = "catenoid_frame_plane";
    s.description = "plane z = 0 in the Weitzenboeck space whose frame is the inverse catenoid Darboux frame";
    s.frame = {{{"-sin(x)", "cos(x)", "0"},
                {"tanh(y)*cos(x)", "tanh(y)*sin(x)", "sech(y)"},
                {"sech(y)*cos(x)", "sech(y)*sin(x)", "-tanh(y)"}}};
    s.X = {"u", "v", "0"};
    s.domain = {{{"0", "2*pi"}, {"-2", "2"}}};
    s.periodic = {true, false};
    s.isothermal = true;
    s.normal_extension = Row3{"sech(y)*cos(x)", "sech(y)*sin(x)", "-tanh(y)"};
    s.goldens = {{"H", "0"},
                 {"star_tau", "0"},
                 {"K_e", "-sech(v)^2"},
                 {"K", "-sech(v)^2"},
                 {"W_on_00", "-sech(v)"},
                 {"W_on_01", "0"},
                 {"W_on_10", "0"},
                 {"W_on_11", "sech(v)"},
                 {"phi_re", "-0.5*sech(v)"},
                 {"phi_im", "0"},
                 {"n_1", "sech(v)*cos(u)"},
                 {"n_2", "sech(v)*sin(u)"},
                 {"n_3", "-tanh(v)"},
                 {"k_conformal", "sech(v)^2"},
                 {"sectional", "0"}};
    return s;
}

SceneSpec catenoid_frame_cylinder(const Params&) {
    SceneSpec s;
    s.name = "catenoid_frame_cylinder";
    s.description = "unit cylinder about the z-axis in the Weitzenboeck space of the rotated catenoid frame";
    const std::string c = "(x/sqrt(x^2+y^2))", sn = "(y/sqrt(x^2+y^2))", t = "tanh(z)", h = "sech(z)";
    s.frame = {{{sn + "^2 + " + h + "*" + c + "^2", sn + "*" + c + "*(" + h + " - 1)", "-" + t + "*" + c},
                {sn + "*" + c + "*(" + h + " - 1)", c + "^2 + " + h + "*" + sn + "^2", "-" + t + "*" + sn},
                {t + "*" + c, t + "*" + sn, h}}};
    s.X = {"cos(u)", "sin(u)", "v"};
    s.domain = {{{"0", "2*pi"}, {"-2", "2"}}};
    s.periodic = {true, false};
    s.isothermal = true;
    s.normal_extension = Row3{h + "*" + c, h + "*" + sn, "-" + t};
    s.goldens = {{"H", "0"},
                 {"star_tau", "0"},
                 {"K_e", "-sech(v)^2"},
                 {"K", "-sech(v)^2"},
                 {"W_on_00", "-sech(v)"},
                 {"W_on_01", "0"},
                 {"W_on_10", "0"},
                 {"W_on_11", "sech(v)"},
                 {"phi_re", "-0.5*sech(v)"},
                 {"phi_im", "0"},
                 {"n_1", "sech(v)*cos(u)"},
                 {"n_2", "sech(v)*sin(u)"},
                 {"n_3", "-tanh(v)"},
                 {"k_conformal", "sech(v)^2"},
                 {"sectional", "0"}};
    return s;
}

SceneSpec rotated_frame_plane(const Params& p) {
    SceneSpec s;
    s.name = "rotated_frame_plane";
    s.description = "plane z = 0 under the frame exp(theta e^) of the standard frame";
    std::string theta = p.count("theta") ? p.at("theta") : "x*y";
    s.parameters = {{"e1", p.count("e1") ? p.at("e1") : "-1"},
                    {"e2", p.count("e2") ? p.at("e2") : "0"},
                    {"e3", p.count("e3") ? p.at("e3") : "0"}};
    Bindings e;
    for (const auto& [k, v] : s.parameters) e[k] = expr::eval(expr::parse(v, VarSet{}), Bindings{});
    if (std::fabs(std::hypot(e["e1"], e["e2"], e["e3"]) - 1.0) > 1e-9)
        throw Error(Errc::NonUnitAxis, "rotated_frame_plane axis must be a unit vector");
    Expr th = expr::parse(theta, Ambient::vars());
    std::string T = "(" + theta + ")";
    std::string TX = "(" + expr::to_string(expr::diff(th, 0)) + ")";
    std::string TY = "(" + expr::to_string(expr::diff(th, 1)) + ")";
    std::string c = "cos" + T, sn = "sin" + T, omc = "(1 - cos" + T + ")";
    s.frame = {{{c + " + " + omc + "*e1*e1", omc + "*e1*e2 - " + sn + "*e3", omc + "*e1*e3 + " + sn + "*e2"},
                {omc + "*e2*e1 + " + sn + "*e3", c + " + " + omc + "*e2*e2", omc + "*e2*e3 - " + sn + "*e1"},
                {omc + "*e3*e1 - " + sn + "*e2", omc + "*e3*e2 + " + sn + "*e1", c + " + " + omc + "*e3*e3"}}};
    s.X = {"u", "v", "0"};
    s.domain = {{{"-1", "1"}, {"-1", "1"}}};
    s.isothermal = true;
    s.normal_extension = s.frame[2];
    s.goldens = {{"H", "-" + TY + "*e1 + " + TX + "*e2"},
                 {"star_tau", "-" + TX + "*e1 - " + TY + "*e2"},
                 {"K_e", "0"},
                 {"K", "0"},
                 {"W_on_00", TX + "*e2"},
                 {"W_on_01", TY + "*e2"},
                 {"W_on_10", "-" + TX + "*e1"},
                 {"W_on_11", "-" + TY + "*e1"},
                 {"phi_re", "0.25*(" + TY + "*e1 + " + TX + "*e2)"},
                 {"phi_im", "0.25*(" + TX + "*e1 - " + TY + "*e2)"},
                 {"n_1", s.frame[2][0]},
                 {"n_2", s.frame[2][1]},
                 {"n_3", s.frame[2][2]},
                 {"sectional", "0"}};
    return s;
}

SceneSpec cartan_schouten_sphere(const Params& p) {
    SceneSpec s;
    s.name = "cartan_schouten_sphere";
    s.description = "unit sphere in R^3 with the Cartan-Schouten connection D + lambda x";
    s.parameters = {{"lambda", p.count("lambda") ? p.at("lambda") : "0.3"}};
    s.frame_defined = false;
    s.metric = identity_text();
    // Γ^k_{ij} = λ ε_{ijk}
    s.connection = {{{{{"0", "0", "0"}, {"0", "0", "lambda"}, {"0", "-lambda", "0"}}},
                     {{{"0", "0", "-lambda"}, {"0", "0", "0"}, {"lambda", "0", "0"}}},
                     {{{"0", "lambda", "0"}, {"-lambda", "0", "0"}, {"0", "0", "0"}}}}};
    sphere_surface(s);
    s.goldens = {{"H", "-2"},          {"star_tau", "2*lambda"}, {"K_e", "1 + lambda^2"},
                 {"K", "1"},           {"W_on_00", "-1"},        {"W_on_01", "-lambda"},
                 {"W_on_10", "lambda"}, {"W_on_11", "-1"},        {"sectional", "-lambda^2"},
                 {"integral_K", "4*pi"}, {"area", "4*pi"}};
    return s;
}

SceneSpec round_sphere_standard(const Params&) {
    SceneSpec s;
    s.name = "round_sphere_standard";
    s.description = "unit sphere in Euclidean space, polar chart";
    s.frame = identity_text();
    sphere_surface(s);
    s.normal_extension = Row3{"x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"};
    s.goldens = {{"H", "-2"},      {"star_tau", "0"}, {"K_e", "1"},  {"K", "1"},          {"W_on_00", "-1"},
                 {"W_on_01", "0"}, {"W_on_10", "0"},  {"W_on_11", "-1"}, {"n_1", "x"},     {"n_2", "y"},
                 {"n_3", "z"},     {"k_conformal", "1"}, {"sectional", "0"}, {"integral_K", "4*pi"},
                 {"area", "4*pi"}, {"degree", "1"}};
    return s;
}

SceneSpec torus_standard(const Params& p) {
    SceneSpec s;
    s.name = "torus_standard";
    s.description = "torus of revolution in Euclidean space, radii R and r";
    s.parameters = {{"R", p.count("R") ? p.at("R") : "2"}, {"r", p.count("r") ? p.at("r") : "1"}};
    s.frame = identity_text();
    s.X = {"(R + r*cos(v))*cos(u)", "(R + r*cos(v))*sin(u)", "r*sin(v)"};
    s.domain = {{{"0", "2*pi"}, {"0", "2*pi"}}};
    s.periodic = {true, true};
    s.closed = true;
    s.euler_characteristic = 0;
    const std::string rho = "sqrt(x^2+y^2)";
    s.normal_extension = Row3{"(1 - R/" + rho + ")*x/r", "(1 - R/" + rho + ")*y/r", "z/r"};
    s.goldens = {{"H", "-1/r - cos(v)/(R + r*cos(v))"},
                 {"star_tau", "0"},
                 {"K_e", "cos(v)/(r*(R + r*cos(v)))"},
                 {"K", "cos(v)/(r*(R + r*cos(v)))"},
                 {"W_on_01", "0"},
                 {"W_on_10", "0"},
                 {"n_1", "cos(u)*cos(v)"},
                 {"n_2", "sin(u)*cos(v)"},
                 {"n_3", "sin(v)"},
                 {"sectional", "0"},
                 {"integral_K", "0"},
                 {"area", "4*pi^2*R*r"},
                 {"degree", "0"}};
    return s;
}

struct Entry {
    BuiltinInfo info;
    SceneSpec (*make)(const Params&);
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r{
        {{"euclidean_plane", "unit square in flat Euclidean space", {}}, euclidean_plane},
        {{"catenoid_frame_plane", "minimal plane whose Gauss map is the catenoid's", {}}, catenoid_frame_plane},
        {{"catenoid_frame_cylinder", "minimal cylinder in the rotated catenoid frame", {}}, catenoid_frame_cylinder},
        {{"rotated_frame_plane",
          "plane in a rotated standard frame; H + i star_tau from theta and e",
          {{"theta", "x*y"}, {"e1", "-1"}, {"e2", "0"}, {"e3", "0"}}},
         rotated_frame_plane},
        {{"cartan_schouten_sphere", "umbilic unit sphere with torsion lambda, K = 1", {{"lambda", "0.3"}}},
         cartan_schouten_sphere},
        {{"round_sphere_standard", "round unit sphere, degree 1", {}}, round_sphere_standard},
        {{"torus_standard", "torus of revolution, degree 0", {{"R", "2"}, {"r", "1"}}}, torus_standard},
    };
    return r;
}

}  // namespace

const std::vector<BuiltinInfo>& list_builtins() {
    static const std::vector<BuiltinInfo> infos = [] {
        std::vector<BuiltinInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

SceneSpec builtin_spec(const std::string& name, const std::map<std::string, std::string>& params) {
    for (const auto& e : registry()) {
        if (e.info.name != name) continue;
        for (const auto& [k, v] : params) {
            bool known = std::any_of(e.info.parameters.begin(), e.info.parameters.end(),
                                     [&](const auto& pp) { return pp.first == k; });
            if (!known) throw Error(Errc::ConfigError, "builtin " + name + " has no parameter " + k);
        }
        return e.make(params);
    }
    throw Error(Errc::UnknownScene, "no builtin scene named " + name);
}

Scene builtin(const std::string& name, const std::map<std::string, std::string>& params) {
    return build_scene(builtin_spec(name, params));
}

}  // namespace rcsurf
