#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affsphere/gallery.hpp"
#include "affsphere/improper.hpp"
#include "affsphere/verify.hpp"

#include <random>

using namespace affsphere;
using improper::LiouvilleMode;
using improper::PotentialData;

namespace {

constexpr double kPi = 3.14159265358979323846;

PotentialData constant_potentials(double a, double b, double r, double s, double eps,
                                  double delta, int lo, int hi) {
    PotentialData p;
    p.alpha = Field1<double>(lo, hi, a);
    p.beta = Field1<double>(lo, hi, b);
    p.rho = Field1<double>(lo, hi, r);
    p.sigma = Field1<double>(lo, hi, s);
    p.eps = eps;
    p.delta = delta;
    p.H = 0;
    return p;
}

PotentialData random_potentials(std::mt19937_64& rng, double eps, double delta, int lo, int hi) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    PotentialData p = constant_potentials(1, 0, 1, 0, eps, delta, lo, hi);
    for (int k = lo; k <= hi; ++k) {
        p.alpha.at(k) = 1.0 + 0.6 * val(rng);
        p.beta.at(k) = val(rng);
        p.rho.at(k) = 1.0 + 0.6 * val(rng);
        p.sigma.at(k) = val(rng);
    }
    return p;
}

double max_dliouville_residual(const SurfaceData& d, double eps, double delta) {
    const LatticeWindow& w = d.omega.window();
    double worst = 0.0;
    for (int m = w.m_min; m < w.m_max; ++m)
        for (int n = w.n_min; n < w.n_max; ++n)
            worst = std::max(worst, std::abs(d.omega.at(n + 1, m + 1) * d.omega.at(n, m) -
                                             d.omega.at(n + 1, m) * d.omega.at(n, m + 1) +
                                             eps * delta * d.A.at(n + 1) * d.B.at(m + 1)));
    return worst;
}

}  // namespace

TEST_CASE("accumulate: arithmetic series and the empty sum") {
    const PotentialData p = constant_potentials(1, 1, 1, 1, 1.0, 1.0, -4, 5);
    const auto acc = improper::accumulate(p);
    for (int n = -3; n <= 5; ++n) {
        CHECK(acc.a.at(n) == doctest::Approx(n));
        CHECK(acc.b.at(n) == doctest::Approx(n));
        CHECK(acc.c.at(n) == doctest::Approx(n * (n + 1) / 2.0));
        CHECK(acc.t.at(n) == doctest::Approx(n * (n + 1) / 2.0));
    }
    CHECK(acc.a.at(0) == 0.0);
    CHECK(acc.b.at(0) == 0.0);
    CHECK(acc.c.at(0) == 0.0);
    CHECK(acc.r.at(0) == 0.0);
    CHECK(acc.s.at(0) == 0.0);
    CHECK(acc.t.at(0) == 0.0);
    CHECK(acc.a.at(-2) == doctest::Approx(-2.0));
}

TEST_CASE("potential builder: the hyperbolic paraboloid") {
    const PotentialData p = constant_potentials(1, 0, 1, 0, 1.0, 1.0, -5, 6);
    const LatticeWindow w(-4, 5, -4, 5);
    const auto [f, d] = improper::build_discrete_from_potentials(p, 1.0, w);
    for (int m = -4; m <= 5; ++m)
        for (int n = -4; n <= 5; ++n) {
            CHECK((f.at(n, m) - Vec3(n, m, double(n) * m)).norm() <= 1e-13);
            CHECK(d.omega.at(n, m) == doctest::Approx(1.0));
        }
    for (int n = -4; n <= 5; ++n) CHECK(d.A.at(n) == 0.0);
    for (int m = -4; m <= 5; ++m) CHECK(d.B.at(m) == 0.0);
    CHECK(f.at(0, 0).norm() == 0.0);
}

TEST_CASE("potential builder satisfies the lattice equation on random data") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
        const PotentialData p = random_potentials(rng, 0.7, 1.3, -5, 5);
        const LatticeWindow w(-3, 3, -3, 3);
        const auto [f, d] = improper::build_discrete_from_potentials(p, 1.0, w);
        CHECK(max_dliouville_residual(d, p.eps, p.delta) <= 1e-12);
        // normal direction: mixed difference vertical with third component omega
        for (int m = -3; m < 3; ++m)
            for (int n = -3; n < 3; ++n) {
                const Vec3 md = second_mixed_difference(f, n, m);
                CHECK(std::abs(md.x()) <= 1e-12);
                CHECK(std::abs(md.y()) <= 1e-12);
                CHECK(md.z() == doctest::Approx(d.omega.at(n, m)).epsilon(1e-10));
            }
    }
}

TEST_CASE("potential and curve builders produce the same surface") {
    std::mt19937_64 rng(23);
    const PotentialData p = random_potentials(rng, 0.5, 0.8, -6, 6);
    const LatticeWindow w(-4, 4, -4, 4);
    for (double lambda : {1.0, -1.0, 1.7}) {
        const auto [fp, dp] = improper::build_discrete_from_potentials(p, lambda, w);
        const auto acc = improper::accumulate(p, lambda);
        const auto [g1, g2] = improper::curves_from_accumulated(acc, p.eps, p.delta);
        const auto [fc, dc] = improper::build_discrete_from_curves(g1, g2, w);
        for (int m = -4; m <= 4; ++m)
            for (int n = -4; n <= 4; ++n) {
                CHECK((fp.at(n, m) - fc.at(n, m)).norm() <= 1e-12);
                CHECK(dp.omega.at(n, m) == doctest::Approx(dc.omega.at(n, m)).epsilon(1e-12));
            }
        for (int n = -4; n <= 4; ++n)
            CHECK(dp.A.at(n) == doctest::Approx(dc.A.at(n)).epsilon(1e-11));
        for (int m = -4; m <= 4; ++m)
            CHECK(dp.B.at(m) == doctest::Approx(dc.B.at(m)).epsilon(1e-11));
    }
}

TEST_CASE("curve builder: axis-aligned segments give the bilinear surface") {
    const double eps = 0.5, delta = 0.25;
    const DiscreteCurve g1 =
        sample_curve([](double t) { return Vec2(t, 0.0); }, eps, -5, 5);
    const DiscreteCurve g2 =
        sample_curve([](double t) { return Vec2(0.0, t); }, delta, -5, 5);
    const LatticeWindow w(-4, 4, -4, 4);
    const auto [f, d] = improper::build_discrete_from_curves(g1, g2, w);
    for (int m = -4; m <= 4; ++m)
        for (int n = -4; n <= 4; ++n) {
            CHECK((f.at(n, m) - Vec3(eps * n, delta * m, eps * n * delta * m)).norm() <= 1e-14);
            CHECK(d.omega.at(n, m) == doctest::Approx(1.0));
        }
    for (int n = -4; n <= 4; ++n) CHECK(d.A.at(n) == 0.0);
}

TEST_CASE("curve builder checks coverage") {
    const DiscreteCurve g1 = sample_curve([](double t) { return Vec2(t, 0.0); }, 1.0, -2, 2);
    const DiscreteCurve g2 = sample_curve([](double t) { return Vec2(0.0, t); }, 1.0, -2, 2);
    CHECK_THROWS_AS(improper::build_discrete_from_curves(g1, g2, LatticeWindow(-2, 2, -2, 2)),
                    RangeError);
}

TEST_CASE("windows away from the origin agree with enclosing ones") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    Field1<Vec2> p1(-7, 7), p2(-7, 7);
    for (int i = -7; i <= 7; ++i) {
        p1.at(i) = Vec2(val(rng), val(rng));
        p2.at(i) = Vec2(val(rng), val(rng));
    }
    const DiscreteCurve g1(0.5, p1), g2(0.5, p2);
    const auto [fbig, dbig] =
        improper::build_discrete_from_curves(g1, g2, LatticeWindow(-6, 6, -6, 6));
    const auto [foff, doff] =
        improper::build_discrete_from_curves(g1, g2, LatticeWindow(2, 5, -5, -2));
    for (int m = -5; m <= -2; ++m)
        for (int n = 2; n <= 5; ++n) {
            CHECK((fbig.at(n, m) - foff.at(n, m)).norm() == 0.0);
            CHECK(dbig.omega.at(n, m) == doff.omega.at(n, m));
        }
}

TEST_CASE("height recurrence is exact") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    Field1<Vec2> p1(-6, 6), p2(-6, 6);
    for (int i = -6; i <= 6; ++i) {
        p1.at(i) = Vec2(val(rng), val(rng));
        p2.at(i) = Vec2(val(rng), val(rng));
    }
    const DiscreteCurve g1(0.5, p1), g2(0.5, p2);
    const LatticeWindow w(-5, 5, -5, 5);
    const auto [f, d] = improper::build_discrete_from_curves(g1, g2, w);
    for (int m = -5; m < 5; ++m)
        for (int n = -5; n < 5; ++n) {
            const double mixed = f.at(n + 1, m + 1).z() - f.at(n + 1, m).z() -
                                 f.at(n, m + 1).z() + f.at(n, m).z();
            const Vec2 d1 = g1.at(n + 1) - g1.at(n);
            const Vec2 d2 = g2.at(m + 1) - g2.at(m);
            CHECK(std::abs(mixed - (d1.x() * d2.y() - d1.y() * d2.x())) <= 1e-12);
        }
}

TEST_CASE("associated family") {
    const DiscreteCurve g1 = sample_curve(
        [](double t) { return Vec2(std::cos(t), std::sin(2.0 * t)); }, 0.3, -6, 6);
    const DiscreteCurve g2 = sample_curve(
        [](double t) { return Vec2(std::sin(t), t + t * t); }, 0.3, -6, 6);

    SUBCASE("lambda = 1 is the identity") {
        const auto [h1, h2] = improper::associated_family(g1, g2, 1.0);
        for (int i = -6; i <= 6; ++i) {
            CHECK((h1.at(i) - g1.at(i)).norm() == 0.0);
            CHECK((h2.at(i) - g2.at(i)).norm() == 0.0);
        }
    }
    SUBCASE("lambda = -1 reflects the first coordinate") {
        const auto [h1, h2] = improper::associated_family(g1, g2, -1.0);
        for (int i = -6; i <= 6; ++i) {
            CHECK(h1.at(i).x() == -g1.at(i).x());
            CHECK(h1.at(i).y() == g1.at(i).y());
        }
    }
    SUBCASE("lambda = 0 is rejected") {
        CHECK_THROWS_AS(improper::associated_family(g1, g2, 0.0), std::domain_error);
    }
    SUBCASE("omega invariant, A and B scaled by lambda^3 and lambda^-3") {
        const LatticeWindow w(-5, 5, -5, 5);
        const auto [f0, d0] = improper::build_discrete_from_curves(g1, g2, w);
        for (double lambda : {2.0, -1.5, 0.5}) {
            const auto [h1, h2] = improper::associated_family(g1, g2, lambda);
            const auto [f1, d1] = improper::build_discrete_from_curves(h1, h2, w);
            const double l3 = lambda * lambda * lambda;
            for (int m = -5; m <= 5; ++m)
                for (int n = -5; n <= 5; ++n)
                    CHECK(std::abs(d1.omega.at(n, m) - d0.omega.at(n, m)) <= 1e-12);
            for (int n = -5; n <= 5; ++n)
                CHECK(std::abs(d1.A.at(n) - l3 * d0.A.at(n)) <= 1e-12);
            for (int m = -5; m <= 5; ++m)
                CHECK(std::abs(d1.B.at(m) - d0.B.at(m) / l3) <= 1e-12);
        }
    }
}

TEST_CASE("smooth curve builder: trivial and circle data") {
    SUBCASE("axis curves give f = (u, v, uv)") {
        SmoothCurveSampler g1{[](double t) { return Vec2(t, 0); },
                              [](double) { return Vec2(1, 0); },
                              [](double) { return Vec2(0, 0); }};
        SmoothCurveSampler g2{[](double t) { return Vec2(0, t); },
                              [](double) { return Vec2(0, 1); },
                              [](double) { return Vec2(0, 0); }};
        const GridSpec g(0.25, -8, 8);
        const auto [f, d] = improper::build_smooth_from_curves(g1, g2, g, g);
        for (int j = -8; j <= 8; ++j)
            for (int i = -8; i <= 8; ++i) {
                const double u = 0.25 * i, v = 0.25 * j;
                CHECK((f.at(i, j) - Vec3(u, v, u * v)).norm() <= 1e-13);
                CHECK(d.omega.at(i, j) == doctest::Approx(1.0));
            }
    }
    SUBCASE("antipodal circle pair reproduces omega = sin(u-v), A = 1, B = -1") {
        SmoothCurveSampler g1{[](double t) { return Vec2(-std::cos(t), -std::sin(t)); },
                              [](double t) { return Vec2(std::sin(t), -std::cos(t)); },
                              [](double t) { return Vec2(std::cos(t), std::sin(t)); }};
        SmoothCurveSampler g2{[](double t) { return Vec2(std::cos(t), std::sin(t)); },
                              [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
                              [](double t) { return Vec2(-std::cos(t), -std::sin(t)); }};
        const GridSpec g(kPi / 40.0, 0, 40);
        const auto [f, d] = improper::build_smooth_from_curves(g1, g2, g, g);
        for (int j = 0; j <= 40; ++j)
            for (int i = 0; i <= 40; ++i)
                CHECK(std::abs(d.omega.at(i, j) - std::sin(g.value(i) - g.value(j))) <= 1e-12);
        for (int i = 0; i <= 40; ++i) CHECK(d.A.at(i) == doctest::Approx(1.0));
        for (int j = 0; j <= 40; ++j) CHECK(d.B.at(j) == doctest::Approx(-1.0));
    }
    SUBCASE("graph curves give Cayley data A = 1, B = 0") {
        SmoothCurveSampler g1{[](double t) { return Vec2(t, t * t / 2.0); },
                              [](double t) { return Vec2(1.0, t); },
                              [](double) { return Vec2(0.0, 1.0); }};
        SmoothCurveSampler g2{[](double t) { return Vec2(0.0, t); },
                              [](double) { return Vec2(0.0, 1.0); },
                              [](double) { return Vec2(0.0, 0.0); }};
        const GridSpec g(0.1, -5, 5);
        const auto [f, d] = improper::build_smooth_from_curves(g1, g2, g, g);
        for (int i = -5; i <= 5; ++i) CHECK(d.A.at(i) == doctest::Approx(1.0));
        for (int j = -5; j <= 5; ++j) CHECK(std::abs(d.B.at(j)) <= 1e-14);
        for (int j = -5; j <= 5; ++j)
            for (int i = -5; i <= 5; ++i)
                CHECK(d.omega.at(i, j) == doctest::Approx(1.0));
    }
}

TEST_CASE("smooth potential builder") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    SUBCASE("beta = sigma = 0 gives f = (u, v, uv)") {
        const GridSpec g(0.2, -5, 5);
        const LatticeSurface f = improper::build_smooth_from_potentials(one, zero, one, zero,
                                                                        1.0, g, g);
        for (int j = -5; j <= 5; ++j)
            for (int i = -5; i <= 5; ++i) {
                const double u = 0.2 * i, v = 0.2 * j;
                CHECK((f.at(i, j) - Vec3(u, v, u * v)).norm() <= 1e-12);
            }
        CHECK(f.at(0, 0).norm() == 0.0);
    }
    SUBCASE("matches the discrete builder to first order in the steps") {
        auto alpha = [](double t) { return 1.0 + 0.3 * std::sin(t); };
        auto beta = [](double t) { return 0.5 * std::cos(t); };
        auto rho = [](double t) { return 1.0 - 0.2 * std::cos(t); };
        auto sigma = [](double t) { return 0.4 * std::sin(t); };
        std::vector<double> errs;
        for (int N : {4, 8, 16}) {
            const double h = 1.0 / N;
            const GridSpec g(h, -N, N);
            const LatticeSurface fs =
                improper::build_smooth_from_potentials(alpha, beta, rho, sigma, 1.0, g, g);
            PotentialData p;
            p.alpha = Field1<double>(-N - 1, N + 1);
            p.beta = Field1<double>(-N - 1, N + 1);
            p.rho = Field1<double>(-N - 1, N + 1);
            p.sigma = Field1<double>(-N - 1, N + 1);
            p.eps = p.delta = h;
            p.H = 0;
            for (int k = -N - 1; k <= N + 1; ++k) {
                p.alpha.at(k) = alpha(h * k);
                p.beta.at(k) = beta(h * k);
                p.rho.at(k) = rho(h * k);
                p.sigma.at(k) = sigma(h * k);
            }
            const auto [fd, dd] =
                improper::build_discrete_from_potentials(p, 1.0, LatticeWindow(-N, N, -N, N));
            double err = 0.0;
            for (int m = -N; m <= N; ++m)
                for (int n = -N; n <= N; ++n)
                    err = std::max(err, (fs.at(n, m) - fd.at(n, m)).norm());
            errs.push_back(err);
        }
        CHECK(errs[0] / errs[1] > 1.5);
        CHECK(errs[0] / errs[1] < 2.5);
        CHECK(errs[1] / errs[2] > 1.5);
        CHECK(errs[1] / errs[2] < 2.5);
    }
}

TEST_CASE("smooth Liouville solution") {
    auto one = [](double) { return 1.0; };
    SUBCASE("A = 1, B = -1 gives omega = u - v") {
        const GridSpec g(0.2, -5, 5);
        const auto omega = improper::liouville_solution_smooth(
            one, [](double) { return -1.0; }, one, one, g, g);
        for (int j = -5; j <= 5; ++j)
            for (int i = -5; i <= 5; ++i)
                CHECK(omega.at(i, j) == doctest::Approx(0.2 * i - 0.2 * j).epsilon(1e-12));
        // u = v is the singular line
        for (int i = -5; i <= 5; ++i) CHECK(std::abs(omega.at(i, i)) <= 1e-13);
    }
    SUBCASE("PDE residual shrinks at second order") {
        auto A = [](double u) { return 1.0 + 0.5 * std::sin(u); };
        auto B = [](double v) { return -1.0 - 0.3 * std::cos(v); };
        auto phi = [](double u) { return 1.0 + 0.2 * std::cos(u); };
        auto psi = [](double v) { return 1.0 + 0.1 * std::sin(v); };
        // residual at the fixed point (0.5, -0.5), a node of both grids
        double res[2];
        for (int pass = 0; pass < 2; ++pass) {
            const int N = pass == 0 ? 10 : 20;
            const double h = 1.0 / N;
            const GridSpec g(h, -N, N);
            const auto omega = improper::liouville_solution_smooth(A, B, phi, psi, g, g);
            const int i = N / 2, j = -N / 2;
            auto lg = [&](int a, int b) { return std::log(std::abs(omega.at(a, b))); };
            const double mixed = (lg(i + 1, j + 1) - lg(i + 1, j - 1) - lg(i - 1, j + 1) +
                                  lg(i - 1, j - 1)) /
                                 (4.0 * h * h);
            res[pass] = std::abs(mixed + A(0.5) * B(-0.5) / std::pow(omega.at(i, j), 2));
        }
        CHECK(res[1] < res[0]);
        CHECK(res[0] / res[1] > 3.0);  // second order: ratio about 4
        CHECK(res[1] < 1e-2);
    }
    SUBCASE("negative radicand is a domain error") {
        const GridSpec g(0.5, 0, 2);
        CHECK_THROWS_AS(improper::liouville_solution_smooth(one, one, one, one, g, g),
                        std::domain_error);
    }
}

TEST_CASE("discrete Liouville solution families") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const LatticeWindow w(-4, 4, -4, 4);
    const double eps = 0.6, delta = 1.1;

    Field1<double> A(-5, 5), B(-5, 5), phi(-6, 6), psi(-6, 6);
    for (int k = -5; k <= 5; ++k) {
        A.at(k) = val(rng);
        B.at(k) = val(rng);
    }
    for (int k = -6; k <= 6; ++k) {
        phi.at(k) = 1.0 + 0.5 * val(rng);
        psi.at(k) = 1.0 + 0.5 * val(rng);
    }

    auto residual = [&](const Field2<double>& om) {
        double worst = 0.0;
        for (int m = w.m_min; m < w.m_max; ++m)
            for (int n = w.n_min; n < w.n_max; ++n)
                worst = std::max(worst, std::abs(om.at(n + 1, m + 1) * om.at(n, m) -
                                                 om.at(n + 1, m) * om.at(n, m + 1) +
                                                 eps * delta * A.at(n + 1) * B.at(m + 1)));
        return worst;
    };

    SUBCASE("additive family") {
        const auto om = improper::liouville_solution_discrete(A, B, phi, psi, 0, 0,
                                                              LiouvilleMode::Additive, eps,
                                                              delta, w);
        CHECK(residual(om) <= 1e-12);
        for (int m = w.m_min; m <= w.m_max; ++m)
            for (int n = w.n_min; n <= w.n_max; ++n) {
                const double expect = eps * signed_sum(A, n) + delta * signed_sum(B, m);
                CHECK(om.at(n, m) == doctest::Approx(expect).epsilon(1e-13));
            }
    }
    SUBCASE("general quotient family") {
        const auto om = improper::liouville_solution_discrete(A, B, phi, psi, 0.7, -0.4,
                                                              LiouvilleMode::General, eps, delta,
                                                              w);
        CHECK(residual(om) <= 1e-12);
    }
    SUBCASE("multiplicative family") {
        const auto om = improper::liouville_solution_discrete(
            A, B, phi, psi, 0, 0, LiouvilleMode::MultiplicativeGeneral, eps, delta, w);
        CHECK(residual(om) <= 1e-12);
    }
    SUBCASE("A = B = 0 gives the constant solution") {
        Field1<double> zero(-5, 5, 0.0);
        Field1<double> ones(-6, 6, 1.0);
        const auto om = improper::liouville_solution_discrete(zero, zero, ones, ones, 2.5, -1.0,
                                                              LiouvilleMode::General, eps, delta,
                                                              w);
        for (int m = w.m_min; m <= w.m_max; ++m)
            for (int n = w.n_min; n <= w.n_max; ++n)
                CHECK(om.at(n, m) == doctest::Approx(eps * 2.5 - delta).epsilon(1e-14));
    }
}

TEST_CASE("potential validation") {
    PotentialData p = constant_potentials(1, 0, 1, 0, 1, 1, -2, 2);
    p.alpha.at(1) = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("big-cell boundary sites are emitted and flagged, not errors") {
    // alpha = beta = rho = sigma = 1: b_n = n, s_m = m, so 1 - b s = 0 on
    // the hyperbola n m = 1
    const PotentialData p = constant_potentials(1, 1, 1, 1, 1.0, 1.0, -4, 4);
    const LatticeWindow w(-3, 3, -3, 3);
    const auto [f, d] = improper::build_discrete_from_potentials(p, 1.0, w);
    CHECK(f.finite());
    CHECK(d.is_singular(1, 1));
    CHECK(d.is_singular(-1, -1));
    CHECK_FALSE(d.is_singular(1, 0));
    CHECK(std::abs(d.omega.at(1, 1)) <= d.sing_tol);
}
