#include "affsphere/improper.hpp"

#include <algorithm>
#include <cmath>

namespace affsphere::improper {

namespace {

double det2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

void require_curve_range(const DiscreteCurve& g, int lo, int hi, const char* which) {
    if (g.points.i_min() > lo || g.points.i_max() < hi)
        throw RangeError(std::string(which) + ": curve range [" +
                         std::to_string(g.points.i_min()) + "," +
                         std::to_string(g.points.i_max()) + "] does not cover [" +
                         std::to_string(lo) + "," + std::to_string(hi) + "]");
}

/// Signed sum of x over the convention's range, tabulated by the two-sided
/// recurrence anchored at 0 (the range widens to include 0 if needed).
Field1<double> prefix_signed(int lo, int hi, const std::function<double(int)>& x) {
    lo = std::min(lo, 0);
    hi = std::max(hi, 0);
    Field1<double> out(lo, hi);
    out.at(0) = 0.0;
    for (int n = 0; n < hi; ++n) out.at(n + 1) = out.at(n) + x(n + 1);
    for (int n = 0; n > lo; --n) out.at(n - 1) = out.at(n) - x(n);
    return out;
}

}  // namespace

void PotentialData::validate() const {
    if (!(eps > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("PotentialData: eps, delta must be positive");
    if (H != 0 && H != -1) throw std::invalid_argument("PotentialData: H must be 0 or -1");
    for (int n = alpha.i_min(); n <= alpha.i_max(); ++n)
        if (alpha.at(n) == 0.0)
            throw std::invalid_argument("PotentialData: alpha has a zero at n = " +
                                        std::to_string(n));
    for (int m = rho.i_min(); m <= rho.i_max(); ++m)
        if (rho.at(m) == 0.0)
            throw std::invalid_argument("PotentialData: rho has a zero at m = " +
                                        std::to_string(m));
}

AbcRst accumulate(const PotentialData& p, double lambda) {
    p.validate();
    const int nlo = std::max(p.alpha.i_min(), p.beta.i_min()) - 1;
    const int nhi = std::min(p.alpha.i_max(), p.beta.i_max());
    const int mlo = std::max(p.rho.i_min(), p.sigma.i_min()) - 1;
    const int mhi = std::min(p.rho.i_max(), p.sigma.i_max());
    if (nlo > 0 || nhi < 0 || mlo > 0 || mhi < 0)
        throw RangeError("accumulate: potential ranges must contain 0");

    AbcRst acc;
    acc.lambda = lambda;
    acc.a = prefix_signed(nlo, nhi, [&](int k) { return p.eps * p.alpha.at(k); });
    acc.b = prefix_signed(nlo, nhi, [&](int k) { return p.eps * p.beta.at(k); });
    acc.c = prefix_signed(nlo, nhi, [&](int k) { return p.eps * acc.a.at(k) * p.beta.at(k); });
    acc.r = prefix_signed(mlo, mhi, [&](int k) { return p.delta * p.rho.at(k); });
    acc.s = prefix_signed(mlo, mhi, [&](int k) { return p.delta * p.sigma.at(k); });
    acc.t = prefix_signed(mlo, mhi, [&](int k) { return p.delta * acc.r.at(k) * p.sigma.at(k); });
    return acc;
}

std::pair<LatticeSurface, SurfaceData> build_discrete_from_potentials(
    const PotentialData& p, double lambda, const LatticeWindow& window) {
    if (lambda == 0.0) throw std::domain_error("build_discrete_from_potentials: lambda = 0");
    if (p.H != 0)
        throw std::invalid_argument("build_discrete_from_potentials: improper case needs H = 0");
    const AbcRst acc = accumulate(p, lambda);
    // omega and A need alpha_{n+1}; the z sums need c_{k-1} one step below
    // and run from the base index 0
    if (acc.a.i_min() > std::min(window.n_min, 0) ||
        acc.a.i_max() < std::max(window.n_max + 1, 0) ||
        acc.r.i_min() > std::min(window.m_min, 0) ||
        acc.r.i_max() < std::max(window.m_max + 1, 0))
        throw RangeError("build_discrete_from_potentials: potentials do not cover the window");

    const Field1<double> zu = prefix_signed(window.n_min, window.n_max + 1, [&](int k) {
        return p.eps * p.alpha.at(k) * acc.c.at(k - 1);
    });
    const Field1<double> zv = prefix_signed(window.m_min, window.m_max + 1, [&](int k) {
        return p.delta * p.rho.at(k) * acc.t.at(k - 1);
    });

    const double l1 = lambda, l2 = lambda * lambda, l3 = l2 * lambda;
    LatticeSurface f;
    f.window = window;
    f.eps = p.eps;
    f.delta = p.delta;
    f.H = 0;
    f.points = Field2<Vec3>(window);

    SurfaceData d;
    d.omega = Field2<double>(window);
    d.g = Field2<double>(window, 1.0);
    d.A = Field1<double>(window.n_min, window.n_max);
    d.B = Field1<double>(window.m_min, window.m_max);

    for (int m = window.m_min; m <= window.m_max; ++m) {
        const double rm = acc.r.at(m), sm = acc.s.at(m), tm = acc.t.at(m);
        const double qm = rm * sm - tm;
        for (int n = window.n_min; n <= window.n_max; ++n) {
            const double an = acc.a.at(n), bn = acc.b.at(n), cn = acc.c.at(n);
            const double pn = an * bn - cn;
            f.at(n, m) = Vec3(l1 * an + qm / l2, l2 * pn + rm / l1,
                              an * rm - pn * qm + l3 * zu.at(n) + zv.at(m) / l3);
            d.omega.at(n, m) = (1.0 - bn * sm) * p.alpha.at(n + 1) * p.rho.at(m + 1);
        }
    }
    // The lambda-scaled member of the associated family carries data
    // (omega, l^3 A, l^-3 B); lambda = 1 is the base member.
    for (int n = window.n_min; n <= window.n_max; ++n)
        d.A.at(n) = l3 * p.alpha.at(n + 1) * p.alpha.at(n) * p.beta.at(n);
    for (int m = window.m_min; m <= window.m_max; ++m)
        d.B.at(m) = p.rho.at(m + 1) * p.rho.at(m) * p.sigma.at(m) / l3;
    flag_singular_sites(d);
    return {std::move(f), std::move(d)};
}

std::pair<LatticeSurface, SurfaceData> build_discrete_from_curves(const DiscreteCurve& g1,
                                                                  const DiscreteCurve& g2,
                                                                  const LatticeWindow& window) {
    // one-step margins for the difference data, plus the base index 0 that
    // anchors the height sums
    require_curve_range(g1, std::min(window.n_min, 0) - 1, std::max(window.n_max, 0) + 1,
                        "build_discrete_from_curves");
    require_curve_range(g2, std::min(window.m_min, 0) - 1, std::max(window.m_max, 0) + 1,
                        "build_discrete_from_curves");
    const double eps = g1.step, delta = g2.step;

    const Field1<double> z1 = prefix_signed(
        window.n_min, window.n_max, [&](int k) { return det2(g1.at(k - 1), g1.at(k)); });
    const Field1<double> z2 = prefix_signed(
        window.m_min, window.m_max, [&](int k) { return det2(g2.at(k - 1), g2.at(k)); });

    LatticeSurface f;
    f.window = window;
    f.eps = eps;
    f.delta = delta;
    f.H = 0;
    f.points = Field2<Vec3>(window);

    SurfaceData d;
    d.omega = Field2<double>(window);
    d.g = Field2<double>(window, 1.0);
    d.A = Field1<double>(window.n_min, window.n_max);
    d.B = Field1<double>(window.m_min, window.m_max);

    for (int m = window.m_min; m <= window.m_max; ++m)
        for (int n = window.n_min; n <= window.n_max; ++n) {
            const Vec2 c1 = g1.at(n), c2 = g2.at(m);
            const double z = det2(c1, c2) + z1.at(n) - z2.at(m);
            f.at(n, m) = Vec3(c1.x() + c2.x(), c1.y() + c2.y(), z);
            d.omega.at(n, m) =
                det2((g1.at(n + 1) - c1) / eps, (g2.at(m + 1) - c2) / delta);
        }
    for (int n = window.n_min; n <= window.n_max; ++n)
        d.A.at(n) = det2((g1.at(n + 1) - g1.at(n)) / eps,
                         -(g1.at(n) - g1.at(n - 1)) / (eps * eps));
    for (int m = window.m_min; m <= window.m_max; ++m)
        d.B.at(m) = det2(-(g2.at(m) - g2.at(m - 1)) / (delta * delta),
                         (g2.at(m + 1) - g2.at(m)) / delta);
    flag_singular_sites(d);
    return {std::move(f), std::move(d)};
}

std::pair<DiscreteCurve, DiscreteCurve> associated_family(const DiscreteCurve& g1,
                                                          const DiscreteCurve& g2,
                                                          double lambda) {
    if (lambda == 0.0) throw std::domain_error("associated_family: lambda = 0");
    const double l2 = lambda * lambda;
    Field1<Vec2> p1(g1.points.i_min(), g1.points.i_max());
    for (int i = p1.i_min(); i <= p1.i_max(); ++i)
        p1.at(i) = Vec2(lambda * g1.at(i).x(), l2 * g1.at(i).y());
    Field1<Vec2> p2(g2.points.i_min(), g2.points.i_max());
    for (int i = p2.i_min(); i <= p2.i_max(); ++i)
        p2.at(i) = Vec2(g2.at(i).x() / l2, g2.at(i).y() / lambda);
    return {DiscreteCurve(g1.step, std::move(p1)), DiscreteCurve(g2.step, std::move(p2))};
}

Field1<double> cumulative_integral(const ScalarSampler& g, const GridSpec& grid, int subdiv) {
    if (subdiv < 1) throw std::invalid_argument("cumulative_integral: subdiv must be positive");
    Field1<double> out(grid.i_min, grid.i_max);
    out.at(0) = 0.0;
    const double h = grid.step / subdiv;
    auto panel = [&](double left) {
        double acc = 0.0;
        for (int k = 0; k < subdiv; ++k) {
            const double x0 = left + k * h;
            acc += h / 6.0 * (g(x0) + 4.0 * g(x0 + 0.5 * h) + g(x0 + h));
        }
        return acc;
    };
    for (int i = 0; i < grid.i_max; ++i) out.at(i + 1) = out.at(i) + panel(grid.value(i));
    for (int i = 0; i > grid.i_min; --i) out.at(i - 1) = out.at(i) - panel(grid.value(i - 1));
    return out;
}

namespace {

// enough panels that the cumulative quadrature error sits well below the
// closed-form comparison tolerances
int quad_subdiv(double step) {
    return std::clamp(static_cast<int>(std::ceil(step / 0.003)), 1, 64);
}

}  // namespace

std::pair<LatticeSurface, SurfaceData> build_smooth_from_curves(const SmoothCurveSampler& g1,
                                                                const SmoothCurveSampler& g2,
                                                                const GridSpec& ugrid,
                                                                const GridSpec& vgrid) {
    const Field1<double> i1 = cumulative_integral(
        [&](double u) { return det2(g1.value(u), g1.d1(u)); }, ugrid, quad_subdiv(ugrid.step));
    const Field1<double> i2 = cumulative_integral(
        [&](double v) { return det2(g2.value(v), g2.d1(v)); }, vgrid, quad_subdiv(vgrid.step));

    const LatticeWindow window(ugrid.i_min, ugrid.i_max, vgrid.i_min, vgrid.i_max);
    LatticeSurface f;
    f.window = window;
    f.eps = ugrid.step;
    f.delta = vgrid.step;
    f.H = 0;
    f.points = Field2<Vec3>(window);

    SurfaceData d;
    d.omega = Field2<double>(window);
    d.g = Field2<double>(window, 1.0);
    d.A = Field1<double>(window.n_min, window.n_max);
    d.B = Field1<double>(window.m_min, window.m_max);

    for (int j = vgrid.i_min; j <= vgrid.i_max; ++j) {
        const double v = vgrid.value(j);
        const Vec2 c2 = g2.value(v), d2v = g2.d1(v);
        for (int i = ugrid.i_min; i <= ugrid.i_max; ++i) {
            const double u = ugrid.value(i);
            const Vec2 c1 = g1.value(u);
            f.at(i, j) = Vec3(c1.x() + c2.x(), c1.y() + c2.y(),
                              det2(c1, c2) + i1.at(i) - i2.at(j));
            d.omega.at(i, j) = det2(g1.d1(u), d2v);
        }
    }
    for (int i = ugrid.i_min; i <= ugrid.i_max; ++i) {
        const double u = ugrid.value(i);
        d.A.at(i) = det2(g1.d1(u), g1.d2(u));
    }
    for (int j = vgrid.i_min; j <= vgrid.i_max; ++j) {
        const double v = vgrid.value(j);
        d.B.at(j) = det2(g2.d2(v), g2.d1(v));
    }
    flag_singular_sites(d);
    return {std::move(f), std::move(d)};
}

namespace {

/// Lookup sampler over a tabulated grid; arguments are grid multiples.
ScalarSampler tabulated(const Field1<double>& values, double step) {
    return [values, step](double x) {
        const int i = static_cast<int>(std::llround(x / step));
        return values.at(i);
    };
}

}  // namespace

LatticeSurface build_smooth_from_potentials(const ScalarSampler& alpha, const ScalarSampler& beta,
                                            const ScalarSampler& rho, const ScalarSampler& sigma,
                                            double lambda, const GridSpec& ugrid,
                                            const GridSpec& vgrid) {
    if (lambda == 0.0) throw std::domain_error("build_smooth_from_potentials: lambda = 0");
    // Staged cumulative quadrature: a, b on a quarter-step grid so that the
    // nested integrands (a*beta, alpha*c) have midpoint samples available.
    const GridSpec uq(ugrid.step / 4.0, 4 * ugrid.i_min, 4 * ugrid.i_max);
    const GridSpec vq(vgrid.step / 4.0, 4 * vgrid.i_min, 4 * vgrid.i_max);
    const Field1<double> a4 = cumulative_integral(alpha, uq);
    const Field1<double> b4 = cumulative_integral(beta, uq);
    const Field1<double> r4 = cumulative_integral(rho, vq);
    const Field1<double> s4 = cumulative_integral(sigma, vq);
    const ScalarSampler a_s = tabulated(a4, uq.step);
    const ScalarSampler r_s = tabulated(r4, vq.step);

    const GridSpec uh(ugrid.step / 2.0, 2 * ugrid.i_min, 2 * ugrid.i_max);
    const GridSpec vh(vgrid.step / 2.0, 2 * vgrid.i_min, 2 * vgrid.i_max);
    const Field1<double> c2 =
        cumulative_integral([&](double u) { return a_s(u) * beta(u); }, uh);
    const Field1<double> t2 =
        cumulative_integral([&](double v) { return r_s(v) * sigma(v); }, vh);
    const ScalarSampler c_s = tabulated(c2, uh.step);
    const ScalarSampler t_s = tabulated(t2, vh.step);

    const Field1<double> zu =
        cumulative_integral([&](double u) { return alpha(u) * c_s(u); }, ugrid);
    const Field1<double> zv =
        cumulative_integral([&](double v) { return rho(v) * t_s(v); }, vgrid);

    const double l1 = lambda, l2 = lambda * lambda, l3 = l2 * lambda;
    const LatticeWindow window(ugrid.i_min, ugrid.i_max, vgrid.i_min, vgrid.i_max);
    LatticeSurface f;
    f.window = window;
    f.eps = ugrid.step;
    f.delta = vgrid.step;
    f.H = 0;
    f.points = Field2<Vec3>(window);
    for (int j = vgrid.i_min; j <= vgrid.i_max; ++j) {
        const double rm = r4.at(4 * j), sm = s4.at(4 * j), tm = t2.at(2 * j);
        const double qm = rm * sm - tm;
        for (int i = ugrid.i_min; i <= ugrid.i_max; ++i) {
            const double an = a4.at(4 * i), bn = b4.at(4 * i), cn = c2.at(2 * i);
            const double pn = an * bn - cn;
            f.at(i, j) = Vec3(l1 * an + qm / l2, l2 * pn + rm / l1,
                              an * rm - pn * qm + l3 * zu.at(i) + zv.at(j) / l3);
        }
    }
    return f;
}

Field2<double> liouville_solution_smooth(const ScalarSampler& A, const ScalarSampler& B,
                                         const ScalarSampler& phi, const ScalarSampler& psi,
                                         const GridSpec& ugrid, const GridSpec& vgrid) {
    const Field1<double> iphi = cumulative_integral(phi, ugrid);
    const Field1<double> ipsi = cumulative_integral(psi, vgrid);
    Field2<double> omega(LatticeWindow(ugrid.i_min, ugrid.i_max, vgrid.i_min, vgrid.i_max));
    for (int j = vgrid.i_min; j <= vgrid.i_max; ++j) {
        const double v = vgrid.value(j);
        for (int i = ugrid.i_min; i <= ugrid.i_max; ++i) {
            const double u = ugrid.value(i);
            const double pu = phi(u), pv = psi(v);
            if (pu == 0.0 || pv == 0.0)
                throw std::domain_error("liouville_solution_smooth: phi or psi vanishes");
            const double rad = -A(u) * B(v) / (pu * pv);
            if (rad < 0.0)
                throw std::domain_error("liouville_solution_smooth: negative radicand at (u,v) = (" +
                                        std::to_string(u) + "," + std::to_string(v) + ")");
            omega.at(i, j) = (iphi.at(i) - ipsi.at(j)) * std::sqrt(rad);
        }
    }
    return omega;
}

Field2<double> liouville_solution_discrete(const Field1<double>& A, const Field1<double>& B,
                                           const Field1<double>& phi, const Field1<double>& psi,
                                           double p0, double q0, LiouvilleMode mode, double eps,
                                           double delta, const LatticeWindow& w) {
    for (int n = phi.i_min(); n <= phi.i_max(); ++n)
        if (phi.at(n) == 0.0)
            throw std::invalid_argument("liouville_solution_discrete: phi vanishes at " +
                                        std::to_string(n));
    for (int m = psi.i_min(); m <= psi.i_max(); ++m)
        if (psi.at(m) == 0.0)
            throw std::invalid_argument("liouville_solution_discrete: psi vanishes at " +
                                        std::to_string(m));

    Field2<double> omega(w);
    switch (mode) {
        case LiouvilleMode::Additive: {
            const Field1<double> pa =
                prefix_signed(w.n_min, w.n_max, [&](int k) { return A.at(k); });
            const Field1<double> pb =
                prefix_signed(w.m_min, w.m_max, [&](int k) { return B.at(k); });
            for (int m = w.m_min; m <= w.m_max; ++m)
                for (int n = w.n_min; n <= w.n_max; ++n)
                    omega.at(n, m) = eps * pa.at(n) + delta * pb.at(m);
            break;
        }
        case LiouvilleMode::MultiplicativeGeneral: {
            // phi, psi act as the nonvanishing alpha, rho of the product family
            const Field1<double> pa = prefix_signed(
                w.n_min, w.n_max, [&](int k) { return A.at(k) / (phi.at(k + 1) * phi.at(k)); });
            const Field1<double> pb = prefix_signed(
                w.m_min, w.m_max, [&](int k) { return B.at(k) / (psi.at(k + 1) * psi.at(k)); });
            for (int m = w.m_min; m <= w.m_max; ++m)
                for (int n = w.n_min; n <= w.n_max; ++n)
                    omega.at(n, m) = phi.at(n + 1) * psi.at(m + 1) *
                                     (1.0 - eps * delta * pa.at(n) * pb.at(m));
            break;
        }
        case LiouvilleMode::General: {
            const Field1<double> pa = prefix_signed(
                w.n_min, w.n_max, [&](int k) { return A.at(k) * phi.at(k) * phi.at(k - 1); });
            const Field1<double> pb = prefix_signed(
                w.m_min, w.m_max, [&](int k) { return B.at(k) * psi.at(k) * psi.at(k - 1); });
            for (int m = w.m_min; m <= w.m_max; ++m)
                for (int n = w.n_min; n <= w.n_max; ++n)
                    omega.at(n, m) = (eps * (p0 + pa.at(n)) + delta * (q0 + pb.at(m))) /
                                     (phi.at(n) * psi.at(m));
            break;
        }
    }
    return omega;
}

std::pair<DiscreteCurve, DiscreteCurve> curves_from_accumulated(const AbcRst& acc, double eps,
                                                                double delta) {
    const double l = acc.lambda, l2 = l * l;
    Field1<Vec2> p1(acc.a.i_min(), acc.a.i_max());
    for (int n = p1.i_min(); n <= p1.i_max(); ++n)
        p1.at(n) = Vec2(l * acc.a.at(n), l2 * (acc.a.at(n) * acc.b.at(n) - acc.c.at(n)));
    Field1<Vec2> p2(acc.r.i_min(), acc.r.i_max());
    for (int m = p2.i_min(); m <= p2.i_max(); ++m)
        p2.at(m) = Vec2((acc.r.at(m) * acc.s.at(m) - acc.t.at(m)) / l2, acc.r.at(m) / l);
    return {DiscreteCurve(eps, std::move(p1)), DiscreteCurve(delta, std::move(p2))};
}

}  // namespace affsphere::improper
