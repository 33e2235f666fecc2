#pragma once

// Verification suites over a sampled scene and the JSON report.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rcsurf/grid.hpp"
#include "rcsurf/scene.hpp"

namespace rcsurf {

/// Tolerance budgets: `exact` for quantities built from exact expression
/// derivatives, `fd` for finite-difference stencils, `global` (relative)
/// for quadrature results.
struct ToleranceTier {
    std::string name = "analytic";
    double exact = 1e-7;
    double fd = 1e-5;
    double global = 1e-3;
};

/// "analytic", "strict" (10x tighter) or a positive number used for every
/// budget. ConfigError otherwise.
ToleranceTier parse_tier(const std::string& text);

struct SuiteResult {
    std::string name;
    std::string status;   // pass, fail, skipped
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::size_t disagreements = 0;
    std::string note;
    std::vector<std::pair<std::string, double>> details;

    bool passed() const { return status != "fail"; }
};

struct Report {
    std::string scene;
    int nu = 0;
    int nv = 0;
    std::string tier;
    std::vector<SuiteResult> suites;

    bool passed() const;
    const SuiteResult* find(const std::string& name) const;
    std::string to_json() const;
};

struct VerifyOptions {
    GridOptions grid;
    ToleranceTier tier;
    std::vector<std::string> suites;   // empty: all
    std::uint64_t seed = 0x5eed0f5a11ULL;
};

/// Deterministic smooth random fields for the gauge suite, in x, y, z.
class FieldSampler {
public:
    explicit FieldSampler(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi);
    expr::Expr angle();
    std::array<expr::Expr, 3> unit_axis();

private:
    std::mt19937_64 gen_;
};

Report verify(const Scene& scene, const VerifyOptions& opt);
Report verify(const Scene& scene, const SampleGrid& grid, const VerifyOptions& opt);

}  // namespace rcsurf
