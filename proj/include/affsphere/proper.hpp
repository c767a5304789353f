#pragma once

#include "affsphere/birkhoff.hpp"
#include "affsphere/improper.hpp"

// Discrete proper (H = -1) indefinite affine spheres from normalized
// potentials: one-variable frame products followed by a truncated Birkhoff
// factorization per lattice site.  The position vector is the third column
// of the frame at lambda0, up to one global linear gauge that leaves every
// geometric acceptance check invariant.

namespace affsphere::proper {

using birkhoff::BirkhoffPair;
using improper::PotentialData;
using loop::LaurentMatrix;

struct FrameField {
    LatticeWindow window;
    Field2<LaurentMatrix> frames;
    int H = -1;
    double eps = 1.0;
    double delta = 1.0;
};

/// The one-variable factors xi+_n and xi-_m of the ordinary difference
/// equations F+_{n+1} = F+_n xi+_n, G-_{m+1} = G-_m xi-_m.  xi+_n carries
/// alpha_{n+1}, beta_{n+1}; xi-_m carries rho_{m+1}, sigma_{m+1}.
LaurentMatrix xi_plus(const PotentialData& p, int n);
LaurentMatrix xi_minus(const PotentialData& p, int m);

/// Tabulated factors on [n_min, n_max-1] x [m_min, m_max-1] (transition
/// indices).  Errors if alpha or rho vanishes in range.
std::pair<Field1<LaurentMatrix>, Field1<LaurentMatrix>> potential_factors(
    const PotentialData& p, const LatticeWindow& window);

/// Frame products with F+_0 = G-_0 = id; negative indices use the exact
/// factor inverses.
std::pair<Field1<LaurentMatrix>, Field1<LaurentMatrix>> accumulate_frames(
    const PotentialData& p, const LatticeWindow& window);

struct ProperBuild {
    LatticeSurface surface;
    FrameField frames;
    Field2<double> factorization_residual;
    int K_used = 0;
};

/// Full proper pipeline: per site, factor L = (G-_m)^{-1} F+_n, form
/// Fhat = G-_m V+, read the position from the third column at lambda0.
/// K escalates by 6 up to K_max when the residual exceeds 1e-8.
ProperBuild build_discrete_proper(const PotentialData& p, double lambda0,
                                  const LatticeWindow& window, int K, int K_max = 36);

struct NormalLine {
    Vec3 P, Q;      // f^{m+1}_{n+1} + f^m_n and f^m_{n+1} + f^{m+1}_n
    bool degenerate = false;
};

/// The line l^m_n through P and Q for every cell of the window.
Field2<NormalLine> affine_normal_lines(const LatticeSurface& f);

/// Largest window [0..k] x [0..k] (k <= max_extent) on which every site
/// factorizes with residual <= tol; reports how far the numerical big cell
/// extends for the given potentials.
int largest_big_cell_extent(const PotentialData& p, int K, int max_extent, double tol = 1e-8);

}  // namespace affsphere::proper
