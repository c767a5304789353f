#pragma once

#include "affsphere/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

// Invariant suite: the geometric conditions of the discrete definition,
// data extraction from raw surfaces through the discrete Gauss equations,
// and the lattice-equation / Lax-pair residuals.

namespace affsphere::verify {

struct Tolerances {
    double coplanarity = 1e-8;          // sigma3/sigma1 of the difference matrix
    double normal_parallel = 1e-8;      // H = 0: l-line direction vs xi0
    double normal_concurrent = 1e-7;    // H = -1: max line distance / diameter
    double lattice_equation = 1e-10;    // scaled by the data size
    double lax = 1e-9;                  // scaled
    double extract_match = 1e-9;        // relative
    double volume = 1e-9;               // relative
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    int worst_n = 0, worst_m = 0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool overall() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    void add(CheckResult c) { checks.push_back(std::move(c)); }
    /// Human-readable table.
    std::string table() const;
    /// Machine-readable records, one line per check:
    /// name <TAB> residual <TAB> worst site <TAB> tolerance <TAB> pass
    std::string records() const;
};

/// Five-point coplanarity: per interior site, sigma3/sigma1 of the 3x4
/// matrix of difference vectors to the four neighbours.
CheckResult check_coplanarity(const LatticeSurface& f, const Tolerances& tol = {});

/// l-line condition: parallel to xi0 (H = 0) or concurrent through a common
/// least-squares point (H = -1, residual scaled by the surface diameter).
CheckResult check_normal_condition(const LatticeSurface& f, const Tolerances& tol = {});

/// Per-site data recovered from a raw surface via the discrete Gauss
/// equations.  A and B stay two-index here (they genuinely depend on both
/// indices when H = -1); sites where the frame degenerates are flagged
/// invalid and excluded.
struct ExtractedData {
    Field2<double> omega;
    Field2<double> g;
    Field2<double> A;
    Field2<double> B;
    Field2<std::uint8_t> valid;
    double volume_residual = 0.0;       // max |det Ftilde - omega*g| (relative)
    double gauss_residual = 0.0;        // consistency of the 3x3 solves
    int skipped = 0;                    // singular sites excluded
};

ExtractedData extract_data(const LatticeSurface& f);

/// Collapse extracted data to the one-index improper form; requires H = 0.
/// The reported residual is the variation of A along m and of B along n.
std::pair<SurfaceData, double> collapse_extracted(const ExtractedData& e,
                                                  const LatticeSurface& f);

/// Residuals of the discrete Tzitzeica/Liouville system on extracted
/// (two-index) data.
CheckResult check_lattice_equation(const ExtractedData& d, double eps, double delta, int H,
                                   const Tolerances& tol = {});

/// Same on one-index improper data (the H = 0 lattice equation).
CheckResult check_lattice_equation(const SurfaceData& d, double eps, double delta,
                                   const Tolerances& tol = {});

/// Lax compatibility U^m_n V^m_{n+1} = V^m_n U^{m+1}_n at the given lambda,
/// plus the frame recursion against the moving frame rebuilt from f.
CheckResult check_lax(const SurfaceData& d, const LatticeSurface& f, double lambda,
                      const Tolerances& tol = {});

/// Volume condition det[df/eps, df/delta, xi] = omega * g.
CheckResult check_volume_condition(const LatticeSurface& f, const SurfaceData& d,
                                   const Tolerances& tol = {});

/// Builder data against independently extracted data (relative, nonsingular
/// sites only).
CheckResult check_extract_match(const LatticeSurface& f, const SurfaceData& d,
                                const Tolerances& tol = {});

/// The full discrete suite used by the CLI and the gallery cross checks.
VerificationReport full_suite(const LatticeSurface& f, const SurfaceData* data = nullptr,
                              double lambda = 1.0, const Tolerances& tol = {});

struct ConvergenceRow {
    double h = 0.0;
    double err_f = 0.0;  // sup-norm over common sites, all components
    double err_z = 0.0;  // third component only
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    /// err(h_i) / err(h_{i+1}) for consecutive rows.
    std::vector<double> ratios_f() const;
    std::vector<double> ratios_z() const;
    std::string table() const;
};

/// Discrete-vs-smooth comparison for curve-built surfaces: for each h the
/// curves are sampled at step h on [-extent, extent]^2 and the sup-norm
/// distance to the smooth build on the same nodes is recorded.
ConvergenceTable convergence_study(const SmoothCurveSampler& g1, const SmoothCurveSampler& g2,
                                   double extent, const std::vector<double>& hs);

}  // namespace affsphere::verify
