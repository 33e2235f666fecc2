#pragma once

// Scene documents (.rcscene, YAML) and the built-in scenes.
//
//   name: string
//   description: string                      (optional)
//   parameters: {name: expr, ...}            (optional, constants usable below)
//   ambient:
//     frame: [[F11, F12, F13], ...]          rows of F; column i is E_i
//   or
//     metric: [[g11, g12, g13], ...]
//     connection: [Γ^1, Γ^2, Γ^3]            Γ^k as 3x3 rows i, columns j
//   surface:
//     X: [X1, X2, X3]                        in u, v
//     domain: {u: [lo, hi], v: [lo, hi]}
//     periodic: [bool, bool]                 (default [false, false])
//     isothermal: bool                       (default false)
//     closed: bool                           (default false)
//     euler_characteristic: int              (optional, closed surfaces)
//     normal_extension: [n1, n2, n3]         (optional) in x, y, z
//   gauge: {theta: expr, axis: [e1, e2, e3]} (optional) in x, y, z
//   tolerances: {suite: value, ...}          (optional)
//   goldens: {key: expr, ...}                (optional) in u, v, x, y, z
//
// Ambient expressions use x, y, z. Golden keys: H, star_tau, K_e, K,
// W_on_ab, phi_re, phi_im, n_1, n_2, n_3, k_conformal, sectional (pointwise)
// and integral_K, area, degree (global).

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rcsurf/ambient.hpp"
#include "rcsurf/expr.hpp"
#include "rcsurf/gaussmap.hpp"
#include "rcsurf/surface.hpp"

namespace rcsurf {

using Row3 = std::array<std::string, 3>;
using Text3x3 = std::array<Row3, 3>;

struct SceneLocation {
    int line = 0;    // 1-based, 0 when unknown
    int column = 0;
};

struct SceneSpec {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> parameters;

    bool frame_defined = true;
    Text3x3 frame;
    Text3x3 metric;
    std::array<Text3x3, 3> connection;   // [k][i][j]

    Row3 X;
    std::array<std::array<std::string, 2>, 2> domain;   // [axis][lo, hi]
    std::array<bool, 2> periodic{false, false};
    bool isothermal = false;
    bool closed = false;
    std::optional<int> euler_characteristic;
    std::optional<Row3> normal_extension;

    struct Gauge {
        std::string theta;
        Row3 axis;
    };
    std::optional<Gauge> gauge;

    std::map<std::string, double> tolerances;
    std::vector<std::pair<std::string, std::string>> goldens;

    /// Source positions of scalar fields by dotted path, e.g. "surface.X[1]".
    std::map<std::string, SceneLocation> locations;
};

struct Golden {
    std::string key;
    expr::Expr value;   // variables u, v, x, y, z
};

struct Scene {
    SceneSpec spec;
    expr::Bindings parameters;
    std::shared_ptr<const Ambient> ambient;
    std::shared_ptr<const Surface> surface;
    std::optional<std::array<expr::Expr, 3>> normal_extension;
    std::optional<GaugeField> gauge;
    std::vector<Golden> goldens;

    /// Golden lookup; nullptr when absent.
    const Golden* golden(const std::string& key) const;
};

/// Variables of golden expressions: u, v, x, y, z.
const expr::VarSet& golden_vars();
double eval_golden(const Golden& g, double u, double v, const Vec3& p);

const std::vector<std::string>& golden_keys();
const std::vector<std::string>& suite_names();

SceneSpec parse_scene_text(const std::string& text);
SceneSpec load_scene_spec(const std::string& path);
std::string scene_to_text(const SceneSpec& spec);
void save_scene(const SceneSpec& spec, const std::string& path);

/// Parses every expression, builds ambient and surface, and validates the
/// frame or metric on a lattice of surface points.
Scene build_scene(const SceneSpec& spec);
Scene load_scene(const std::string& path);

struct BuiltinInfo {
    std::string name;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> parameters;   // name, default
};

const std::vector<BuiltinInfo>& list_builtins();

/// Builtin scene with parameter overrides; UnknownScene for unknown names,
/// ConfigError for unknown parameters.
SceneSpec builtin_spec(const std::string& name, const std::map<std::string, std::string>& params = {});
Scene builtin(const std::string& name, const std::map<std::string, std::string>& params = {});

}  // namespace rcsurf
