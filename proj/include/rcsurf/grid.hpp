#pragma once

// Sampling lattices over a scene's surface, quadrature and field export.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rcsurf/extrinsic.hpp"
#include "rcsurf/gaussmap.hpp"
#include "rcsurf/holo.hpp"
#include "rcsurf/quadrature.hpp"
#include "rcsurf/scene.hpp"

namespace rcsurf {

/// Runs fn(0..n-1) on `jobs` threads. Each index is handled exactly once;
/// if any call throws, the exception of the lowest failing index is
/// rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

enum SampleFlag : std::uint32_t {
    kInterior = 1u << 0,
    kMasked = 1u << 1,     // area density below 1e-6
    kUmbilic = 1u << 2,
    kMinimal = 1u << 3,
    kGeodesic = 1u << 4,
    kConformal = 1u << 5,
};

struct SampleRecord {
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    int i = 0;
    int j = 0;
    double u = 0.0;
    double v = 0.0;
    std::uint32_t flags = 0;

    Vec3 p;
    double area = 0.0;
    ExtrinsicData d;

    double K = nan;               // intrinsic, FD
    double gauss_eq = nan;
    double weingarten = nan;
    double sectional_split = nan;
    double egregium = nan;        // flat ambients only
    double ambient_sectional = nan;
    double ambient_sanity = nan;

    bool has_gauss = false;
    Vec3 n{nan, nan, nan};
    double divcurl = nan;
    double gauss_weingarten = nan;   // |W − W from the Gauss map|
    ConformalVerdict conformal;

    bool has_holo = false;
    std::complex<double> phi{nan, nan};
    std::complex<double> psi{nan, nan};
    double psi_residual = nan;
    double bold_h_paths = nan;       // |𝑯 (isothermal path) − 𝑯 (extrinsic)|
    Vec3 L{nan, nan, nan};

    bool interior() const { return (flags & kInterior) != 0; }
};

struct GridOptions {
    int nu = 32;
    int nv = 32;
    int jobs = 1;
    double classify_tol = 1e-7;   // umbilic / minimal / geodesic / conformal thresholds
};

class SampleGrid {
public:
    /// Uniform lattice (periodic: lo + k h, otherwise cell-centred).
    /// ConfigError for an empty lattice.
    static SampleGrid build(const Scene& scene, const GridOptions& opt);

    int nu() const noexcept { return nu_; }
    int nv() const noexcept { return nv_; }
    double du() const noexcept { return du_; }
    double dv() const noexcept { return dv_; }
    const std::vector<SampleRecord>& records() const noexcept { return records_; }
    const SampleRecord& at(int i, int j) const {
        return records_[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv_) + static_cast<std::size_t>(j)];
    }

    ComplexGrid complex_field(const std::function<std::complex<double>(const SampleRecord&)>& f) const;

private:
    int nu_ = 0;
    int nv_ = 0;
    double du_ = 0.0;
    double dv_ = 0.0;
    bool periodic_u_ = false;
    bool periodic_v_ = false;
    std::vector<SampleRecord> records_;
};

/// Field names accepted by integrate(): area, K, K_e, H, star_tau, abs_H
/// (|𝑯|) and, for frame-defined ambients, gauss_area (the pulled-back sphere
/// area n·(n_u × n_v), integrated without the √det G factor).
const std::vector<std::string>& integrable_fields();

/// ∫ f √det G du dv with the quadrature_axis rules; UndefinedField for
/// unknown names or fields the ambient does not support.
double integrate(const Scene& scene, const std::string& field, int nu, int nv, int jobs = 1);

/// Field table with header u, v, p_x, p_y, p_z, H, star_tau, K_e,
/// K_intrinsic, |phi|, |psi|, n_1, n_2, n_3, flags; 17 significant digits.
std::string fields_table(const SampleGrid& grid);
void export_fields(const SampleGrid& grid, const std::string& path);

struct FieldTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

FieldTable read_fields(const std::string& path);

}  // namespace rcsurf
