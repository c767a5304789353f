#pragma once

#include "affsphere/improper.hpp"
#include "affsphere/verify.hpp"

// Closed-form generators for the worked examples, bundled with their
// analytic data and singular-set predicates.  Every closed form carries
// the sign the representation formula itself produces, so the bundles
// agree pointwise with the generic builders.

namespace affsphere::gallery {

using improper::ScalarSampler;

struct ExampleBundle {
    LatticeSurface surface;
    SurfaceData data;
    std::function<bool(int, int)> singular;  // site-level predicate
    std::string note;

    bool smooth = false;
    DiscreteCurve d1, d2;      // discrete bundles
    SmoothCurveSampler s1, s2;  // smooth bundles
    GridSpec ugrid, vgrid;
};

/// One scalar function with enough derivatives for the graph family data.
struct GraphFunction {
    ScalarSampler f, d1, d2, d3;
};

// -- smooth examples ---------------------------------------------------------

ExampleBundle smooth_circle(const GridSpec& ugrid, const GridSpec& vgrid);
/// Grid steps should divide pi/2 so that the curve corners land on nodes.
ExampleBundle smooth_square(const GridSpec& ugrid, const GridSpec& vgrid);
ExampleBundle smooth_genus1(const GridSpec& ugrid, const GridSpec& vgrid);
ExampleBundle smooth_graph(const GraphFunction& P, const GraphFunction& R,
                           const GridSpec& ugrid, const GridSpec& vgrid);

// -- discrete examples -------------------------------------------------------

ExampleBundle discrete_circle(double q1, double q2, double eps, double delta,
                              const LatticeWindow& window);
ExampleBundle discrete_square(int N1, int N2, double eps, double delta,
                              const LatticeWindow& window);
ExampleBundle discrete_genus1(int N, double eps, double delta, const LatticeWindow& window);
ExampleBundle discrete_graph(const Field1<double>& P, const Field1<double>& R, double eps,
                             double delta, const LatticeWindow& window);

/// Rebuild the bundle surface through the generic builder and compare f and
/// data pointwise, check the singular-set predicate against |omega| < tol,
/// and (discrete) run the full verification suite.
verify::VerificationReport cross_check(const ExampleBundle& bundle);

struct AreaCheck {
    double z = 0.0;
    double area = 0.0;  // shoelace signed area of the closed polygon
    double ratio = 0.0;
};

/// z^m_n from the one-curve height formula against the shoelace signed area
/// of the polygon gamma_m -> ... -> gamma_n -> gamma_m.  The ratio is
/// reported (it comes out 2 for every curve and index pair).
AreaCheck shoelace_area_check(const DiscreteCurve& gamma, int n, int m);

/// Finite-difference Hessian determinant of the graph z = psi(x, y) of the
/// one-curve surface at the image of (u0, v0), with stencil spacing h; the
/// (u, v) preimages are found by Newton iteration.  Converges to -1 at
/// O(h^2) wherever the surface is nonsingular.
double monge_ampere_residual(const SmoothCurveSampler& gamma, double u0, double v0, double h);

/// sign with sign(0) = 0; values within `snap` of zero count as zero.
inline double sign_of(double x, double snap = 0.0) {
    if (std::abs(x) <= snap) return 0.0;
    return x > 0.0 ? 1.0 : -1.0;
}

/// Central-difference residual of d_u d_v log|omega| + A B / omega^2 over
/// interior grid sites with |omega| above the cutoff.
double liouville_pde_residual(const Field2<double>& omega, const Field1<double>& A,
                              const Field1<double>& B, double hu, double hv,
                              double omega_cutoff = 0.1);

}  // namespace affsphere::gallery
