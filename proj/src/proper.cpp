#include "affsphere/proper.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace affsphere::proper {



namespace {

int thread_cap() {
    if (const char* env = std::getenv("AFFSPHERE_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run job(i) for i in [0, count) on up to thread_cap() threads.  Each index
/// writes only its own slot, so the result is identical for any thread count.
template <class Job>
void parallel_for(int count, Job&& job) {
    const int threads = std::min(thread_cap(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

LaurentMatrix xi_plus(const PotentialData& p, int n) {
    const double a = p.alpha.at(n + 1), b = p.beta.at(n + 1);
    const double e = p.eps, h = static_cast<double>(p.H);
    LaurentMatrix xi = LaurentMatrix::identity();
    Mat3 m1 = Mat3::Zero();
    m1(0, 2) = -h * a * e;
    m1(1, 0) = b * e;
    m1(2, 1) = a * e;
    xi.set_coeff(1, m1);
    Mat3 m2 = Mat3::Zero();
    m2(0, 1) = -0.5 * h * a * a * e * e;
    m2(2, 0) = a * b * e * e;
    xi.set_coeff(2, m2);
    Mat3 m3 = Mat3::Zero();
    m3(0, 0) = -0.5 * h * a * a * b * e * e * e;
    xi.set_coeff(3, m3);
    return xi;
}

LaurentMatrix xi_minus(const PotentialData& p, int m) {
    const double r = p.rho.at(m + 1), s = p.sigma.at(m + 1);
    const double dl = p.delta, h = static_cast<double>(p.H);
    LaurentMatrix xi = LaurentMatrix::identity();
    Mat3 m1 = Mat3::Zero();
    m1(0, 1) = s * dl;
    m1(1, 2) = -h * r * dl;
    m1(2, 0) = r * dl;
    xi.set_coeff(-1, m1);
    Mat3 m2 = Mat3::Zero();
    m2(1, 0) = -0.5 * h * r * r * dl * dl;
    m2(2, 1) = s * r * dl * dl;
    xi.set_coeff(-2, m2);
    Mat3 m3 = Mat3::Zero();
    m3(1, 1) = -0.5 * h * s * r * r * dl * dl * dl;
    xi.set_coeff(-3, m3);
    return xi;
}

std::pair<Field1<LaurentMatrix>, Field1<LaurentMatrix>> potential_factors(
    const PotentialData& p, const LatticeWindow& w) {
    p.validate();
    if (p.alpha.i_min() > w.n_min + 1 || p.alpha.i_max() < w.n_max ||
        p.rho.i_min() > w.m_min + 1 || p.rho.i_max() < w.m_max)
        throw RangeError("potential_factors: potentials do not cover the window transitions");
    Field1<LaurentMatrix> xp(w.n_min, w.n_max - 1);
    for (int n = w.n_min; n < w.n_max; ++n) xp.at(n) = xi_plus(p, n);
    Field1<LaurentMatrix> xm(w.m_min, w.m_max - 1);
    for (int m = w.m_min; m < w.m_max; ++m) xm.at(m) = xi_minus(p, m);
    return {std::move(xp), std::move(xm)};
}

std::pair<Field1<LaurentMatrix>, Field1<LaurentMatrix>> accumulate_frames(
    const PotentialData& p, const LatticeWindow& w) {
    auto [xp, xm] = potential_factors(p, w);
    Field1<LaurentMatrix> fp(w.n_min, w.n_max);
    fp.at(0) = LaurentMatrix::identity();
    for (int n = 0; n < w.n_max; ++n) fp.at(n + 1) = multiply(fp.at(n), xp.at(n));
    for (int n = 0; n > w.n_min; --n)
        fp.at(n - 1) = multiply(fp.at(n), loop::inverse_of_group_element(xp.at(n - 1)));
    Field1<LaurentMatrix> gm(w.m_min, w.m_max);
    gm.at(0) = LaurentMatrix::identity();
    for (int m = 0; m < w.m_max; ++m) gm.at(m + 1) = multiply(gm.at(m), xm.at(m));
    for (int m = 0; m > w.m_min; --m)
        gm.at(m - 1) = multiply(gm.at(m), loop::inverse_of_group_element(xm.at(m - 1)));
    return {std::move(fp), std::move(gm)};
}

ProperBuild build_discrete_proper(const PotentialData& p, double lambda0,
                                  const LatticeWindow& window, int K, int K_max) {
    if (lambda0 == 0.0) throw std::domain_error("build_discrete_proper: lambda0 = 0");
    if (p.H != -1)
        throw std::invalid_argument("build_discrete_proper: proper case needs H = -1");
    if (!window.contains(0, 0))
        throw std::invalid_argument("build_discrete_proper: window must contain the base point");

    auto [fp, gm] = accumulate_frames(p, window);
    Field1<LaurentMatrix> gminv(window.m_min, window.m_max);
    for (int m = window.m_min; m <= window.m_max; ++m)
        gminv.at(m) = loop::adjugate(gm.at(m));

    ProperBuild out;
    out.surface.window = window;
    out.surface.eps = p.eps;
    out.surface.delta = p.delta;
    out.surface.H = -1;
    out.surface.points = Field2<Vec3>(window);
    out.frames.window = window;
    out.frames.frames = Field2<LaurentMatrix>(window);
    out.frames.H = -1;
    out.frames.eps = p.eps;
    out.frames.delta = p.delta;
    out.factorization_residual = Field2<double>(window, 0.0);
    out.K_used = K;

    const int nn = window.n_count(), nm = window.m_count();
    std::vector<std::string> failures(static_cast<size_t>(nn * nm));
    std::atomic<int> k_used{K};
    parallel_for(nn * nm, [&](int idx) {
        const int n = window.n_min + idx % nn;
        const int m = window.m_min + idx / nn;
        const LaurentMatrix L = multiply(gminv.at(m), fp.at(n));
        try {
            BirkhoffPair pair;
            int k = K;
            for (;;) {
                try {
                    pair = birkhoff::factor_truncated(L, k, -1);
                    break;
                } catch (const birkhoff::TruncationError&) {
                    if (k + 6 > K_max) throw;
                    k += 6;
                }
            }
            int prev = k_used.load();
            while (prev < k && !k_used.compare_exchange_weak(prev, k)) {
            }
            const LaurentMatrix fhat = multiply(gm.at(m), pair.v_plus);
            out.frames.frames.at(n, m) = fhat;
            out.surface.at(n, m) = evaluate(fhat, lambda0).col(2);
            out.factorization_residual.at(n, m) = pair.residual;
        } catch (const std::exception& e) {
            failures[static_cast<size_t>(idx)] =
                "factorization failed at (n,m) = (" + std::to_string(n) + "," +
                std::to_string(m) + "): " + e.what();
        }
    });
    for (const auto& msg : failures)
        if (!msg.empty()) throw std::runtime_error(msg);
    out.K_used = k_used.load();
    return out;
}

Field2<NormalLine> affine_normal_lines(const LatticeSurface& f) {
    const LatticeWindow& w = f.window;
    if (w.n_count() < 2 || w.m_count() < 2)
        throw RangeError("affine_normal_lines: window has no cells");
    const LatticeWindow cells(w.n_min, w.n_max - 1, w.m_min, w.m_max - 1);
    Field2<NormalLine> lines(cells);
    const double scale = f.diameter();
    for (int m = cells.m_min; m <= cells.m_max; ++m)
        for (int n = cells.n_min; n <= cells.n_max; ++n) {
            NormalLine l;
            l.P = f.at(n + 1, m + 1) + f.at(n, m);
            l.Q = f.at(n + 1, m) + f.at(n, m + 1);
            l.degenerate = (l.P - l.Q).norm() <= 1e-14 * std::max(1.0, scale);
            lines.at(n, m) = l;
        }
    return lines;
}

int largest_big_cell_extent(const PotentialData& p, int K, int max_extent, double tol) {
    for (int k = 1; k <= max_extent; ++k) {
        try {
            const LatticeWindow w(0, k, 0, k);
            auto [fp, gm] = accumulate_frames(p, w);
            const LaurentMatrix L = multiply(loop::adjugate(gm.at(k)), fp.at(k));
            birkhoff::factor_truncated(L, K, p.H, tol);
        } catch (const std::exception&) {
            return k - 1;
        }
    }
    return max_extent;
}

}  // namespace affsphere::proper
