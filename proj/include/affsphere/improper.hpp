#pragma once

#include "affsphere/lattice.hpp"

#include <utility>

// Improper (H = 0) constructions: discrete surfaces from two plane curves or
// from normalized potentials, sampled-smooth twins of both, and the general
// solution families of the (discrete) Liouville equation.

namespace affsphere::improper {

using ScalarSampler = std::function<double(double)>;

/// Normalized potential sequences alpha, beta (in n) and rho, sigma (in m).
/// alpha and rho must have no zeros on their ranges.
struct PotentialData {
    Field1<double> alpha;
    Field1<double> beta;
    Field1<double> rho;
    Field1<double> sigma;
    double eps = 1.0;
    double delta = 1.0;
    int H = 0;

    void validate() const;
};

/// Accumulated sequences a, b, c (in n) and r, s, t (in m):
/// a_n = eps * signed_sum(alpha), c_n = eps * signed_sum(a_k beta_k), etc.
struct AbcRst {
    Field1<double> a, b, c;
    Field1<double> r, s, t;
    double lambda = 1.0;
};

AbcRst accumulate(const PotentialData& p, double lambda = 1.0);

/// Discrete improper affine sphere from normalized potentials via the
/// representation formula; data (omega, A, B) attached in closed form.
std::pair<LatticeSurface, SurfaceData> build_discrete_from_potentials(
    const PotentialData& p, double lambda, const LatticeWindow& window);

/// Discrete improper affine sphere from two discrete plane curves:
/// f = (gamma1_n + gamma2_m, z) with z the determinant-plus-signed-sums
/// height.  Curve ranges must cover the window plus one-step margins.
std::pair<LatticeSurface, SurfaceData> build_discrete_from_curves(
    const DiscreteCurve& g1, const DiscreteCurve& g2, const LatticeWindow& window);

/// Associated family on the curve level: gamma1 -> diag(l, l^2) gamma1,
/// gamma2 -> diag(l^-2, l^-1) gamma2.
std::pair<DiscreteCurve, DiscreteCurve> associated_family(const DiscreteCurve& g1,
                                                          const DiscreteCurve& g2,
                                                          double lambda);

/// Sampled-smooth improper affine sphere from two plane curves, with the
/// height integrals evaluated by cumulative Simpson quadrature from 0.
std::pair<LatticeSurface, SurfaceData> build_smooth_from_curves(const SmoothCurveSampler& g1,
                                                                const SmoothCurveSampler& g2,
                                                                const GridSpec& ugrid,
                                                                const GridSpec& vgrid);

/// Sampled-smooth improper affine sphere from potential samplers via the
/// smooth representation formula.
LatticeSurface build_smooth_from_potentials(const ScalarSampler& alpha,
                                            const ScalarSampler& beta,
                                            const ScalarSampler& rho,
                                            const ScalarSampler& sigma, double lambda,
                                            const GridSpec& ugrid, const GridSpec& vgrid);

/// General solution of the smooth Liouville equation from A, B and
/// nonvanishing phi, psi.  Domain error when the radicand -AB/(phi psi)
/// is negative on the grid.
Field2<double> liouville_solution_smooth(const ScalarSampler& A, const ScalarSampler& B,
                                         const ScalarSampler& phi, const ScalarSampler& psi,
                                         const GridSpec& ugrid, const GridSpec& vgrid);

enum class LiouvilleMode {
    Additive,               // omega = eps*sum A + delta*sum B
    MultiplicativeGeneral,  // omega = phi_{n+1} psi_{m+1} (1 - eps*delta*sum*sum)
    General,                // quotient family with phi, psi, p0, q0
};

/// General solution families of the discrete Liouville equation.  phi is
/// indexed by n, psi by m; p0, q0 are the free constants of the quotient
/// family.  Every mode solves the lattice equation exactly.
Field2<double> liouville_solution_discrete(const Field1<double>& A, const Field1<double>& B,
                                           const Field1<double>& phi, const Field1<double>& psi,
                                           double p0, double q0, LiouvilleMode mode,
                                           double eps, double delta, const LatticeWindow& window);

/// Cumulative Simpson integral of g from 0 to step*i for every i in the
/// grid; each interval is split into `subdiv` Simpson panels with midpoint
/// samples.
Field1<double> cumulative_integral(const ScalarSampler& g, const GridSpec& grid,
                                   int subdiv = 1);

/// Curves (a_n, a_n b_n - c_n) and (r_m s_m - t_m, r_m) traced by the
/// accumulated potentials: feeding them to the curve builder reproduces the
/// potential-built surface exactly.
std::pair<DiscreteCurve, DiscreteCurve> curves_from_accumulated(const AbcRst& acc, double eps,
                                                                double delta);

}  // namespace affsphere::improper
