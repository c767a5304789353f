#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affsphere/proper.hpp"
#include "affsphere/verify.hpp"

#include <random>

using namespace affsphere;
using improper::PotentialData;
using loop::LaurentMatrix;

namespace {

PotentialData ones(double eps, double delta, int H, int lo, int hi) {
    PotentialData p;
    p.alpha = Field1<double>(lo, hi, 1.0);
    p.beta = Field1<double>(lo, hi, 1.0);
    p.rho = Field1<double>(lo, hi, 1.0);
    p.sigma = Field1<double>(lo, hi, 1.0);
    p.eps = eps;
    p.delta = delta;
    p.H = H;
    return p;
}

}  // namespace

TEST_CASE("potential factors telescope to the explicit improper frames") {
    PotentialData p = ones(1.0, 1.0, 0, -3, 4);
    const LatticeWindow w(-2, 3, -2, 3);
    auto [fp, gm] = proper::accumulate_frames(p, w);
    CHECK(loop::coeff_distance(fp.at(0), LaurentMatrix::identity()) == 0.0);
    CHECK(loop::coeff_distance(gm.at(0), LaurentMatrix::identity()) == 0.0);
    // alpha = beta = 1, eps = 1, n = 2: a = b = 2, c = 3
    CHECK(loop::coeff_distance(fp.at(2), birkhoff::make_fplus_h0(2, 2, 3)) <= 1e-14);
    // n = -2: a = b = -2, c = eps*(-a_{-1} - a_0)... signed sums give c = 1
    const auto acc = improper::accumulate(p);
    CHECK(loop::coeff_distance(fp.at(-2), birkhoff::make_fplus_h0(acc.a.at(-2), acc.b.at(-2),
                                                                  acc.c.at(-2))) <= 1e-13);
    CHECK(loop::coeff_distance(
              gm.at(3), birkhoff::make_gminus_h0(acc.r.at(3), acc.s.at(3), acc.t.at(3))) <=
          1e-13);
}

TEST_CASE("zero beta row gives an identity-free xi+ only through alpha") {
    PotentialData p = ones(1.0, 1.0, 0, -1, 2);
    p.beta = Field1<double>(-1, 2, 0.0);
    p.alpha = Field1<double>(-1, 2, 0.0 + 1e-300);
    // alpha must be nonzero; a zero row means xi+ = id only when both vanish,
    // so check the H = 0 factor with beta = 0 is unit lower bidiagonal
    p.alpha = Field1<double>(-1, 2, 2.0);
    const LaurentMatrix xi = proper::xi_plus(p, 0);
    CHECK(xi.coeff(1)(1, 0) == 0.0);
    CHECK(xi.coeff(1)(2, 1) == 2.0);
    CHECK(xi.coeff(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factor degree growth per step") {
    for (int H : {0, -1}) {
        PotentialData p = ones(0.5, 0.5, H, -1, 6);
        const LatticeWindow w(0, 5, 0, 5);
        auto [fp, gm] = proper::accumulate_frames(p, w);
        const int per_step = H == 0 ? 2 : 3;
        for (int n = 0; n <= 5; ++n) {
            CHECK(fp.at(n).max_degree() <= per_step * n);
            CHECK(fp.at(n).min_degree() >= 0);
        }
        for (int m = 0; m <= 5; ++m) {
            CHECK(gm.at(m).min_degree() >= -per_step * m);
            CHECK(gm.at(m).max_degree() <= 0);
        }
    }
}

TEST_CASE("factors have unit determinant for random proper data") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    PotentialData p = ones(0.7, 0.4, -1, 0, 5);
    for (int k = 0; k <= 5; ++k) {
        p.alpha.at(k) = 1.0 + 0.5 * val(rng);
        p.beta.at(k) = val(rng);
        p.rho.at(k) = 1.0 + 0.5 * val(rng);
        p.sigma.at(k) = val(rng);
    }
    for (int k = 0; k < 4; ++k)
        for (double lambda : {1.0, -1.0, 2.0}) {
            CHECK(std::abs(loop::evaluate(proper::xi_plus(p, k), lambda).determinant() - 1.0) <=
                  1e-12);
            CHECK(std::abs(loop::evaluate(proper::xi_minus(p, k), lambda).determinant() - 1.0) <=
                  1e-12);
        }
}

TEST_CASE("proper build: base point, geometry, frames") {
    PotentialData p = ones(0.1, 0.1, -1, -1, 7);
    const LatticeWindow w(0, 5, 0, 5);
    const auto build = proper::build_discrete_proper(p, 1.0, w, 12);

    SUBCASE("base point is the third unit vector") {
        CHECK((build.surface.at(0, 0) - Vec3(0, 0, 1)).norm() <= 1e-12);
        CHECK(loop::coeff_distance(build.frames.frames.at(0, 0), LaurentMatrix::identity()) <=
              1e-12);
    }

    SUBCASE("coplanarity and concurrency") {
        const auto cop = verify::check_coplanarity(build.surface);
        INFO(cop.residual);
        CHECK(cop.pass);
        CHECK(cop.residual <= 1e-8);
        const auto con = verify::check_normal_condition(build.surface);
        INFO(con.residual);
        CHECK(con.name == "normal-concurrent");
        CHECK(con.pass);
        CHECK(con.residual <= 1e-7);
    }

    SUBCASE("frames satisfy the twisted conditions") {
        for (int m = 0; m <= 5; ++m)
            for (int n = 0; n <= 5; ++n)
                CHECK(loop::verify_twisted(build.frames.frames.at(n, m), -1).worst() <= 1e-8);
    }

    SUBCASE("frame consistency: G- V+ equals F+ V-") {
        auto [fp, gm] = proper::accumulate_frames(p, w);
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                const LaurentMatrix L = multiply(loop::adjugate(gm.at(m)), fp.at(n));
                const auto pair = birkhoff::factor_truncated(L, 12, -1);
                const LaurentMatrix lhs = multiply(gm.at(m), pair.v_plus);
                const LaurentMatrix rhs = multiply(fp.at(n), pair.v_minus);
                CHECK(loop::coeff_distance(lhs, rhs) <= 1e-8);
                CHECK(loop::coeff_distance(lhs, build.frames.frames.at(n, m)) <= 1e-8);
            }
    }

    SUBCASE("Lax closure: Uhat has degrees 0..3, Vhat degrees -3..0") {
        for (int m = 0; m <= 2; ++m)
            for (int n = 0; n <= 2; ++n) {
                const LaurentMatrix inv =
                    loop::inverse_of_group_element(build.frames.frames.at(n, m), 60, 60);
                LaurentMatrix uhat = multiply(inv, build.frames.frames.at(n + 1, m));
                LaurentMatrix vhat = multiply(inv, build.frames.frames.at(n, m + 1));
                double outside = 0.0;
                for (const auto& [k, c] : uhat.coeffs())
                    if (k < 0 || k > 3) outside = std::max(outside, c.cwiseAbs().maxCoeff());
                for (const auto& [k, c] : vhat.coeffs())
                    if (k < -3 || k > 0) outside = std::max(outside, c.cwiseAbs().maxCoeff());
                CHECK(outside <= 1e-8);
            }
    }

    SUBCASE("extracted data satisfies the proper lattice equation") {
        const auto e = verify::extract_data(build.surface);
        const auto c = verify::check_lattice_equation(e, p.eps, p.delta, -1);
        INFO(c.residual);
        CHECK(c.residual <= 1e-7);
    }
}

TEST_CASE("proper build on a window with negative indices") {
    PotentialData p = ones(0.1, 0.1, -1, -4, 4);
    const LatticeWindow w(-3, 2, -3, 2);
    const auto build = proper::build_discrete_proper(p, 1.0, w, 12);
    CHECK((build.surface.at(0, 0) - Vec3(0, 0, 1)).norm() <= 1e-12);
    CHECK(verify::check_coplanarity(build.surface).pass);
    CHECK(verify::check_normal_condition(build.surface).pass);
}

TEST_CASE("affine normal lines") {
    SUBCASE("bilinear surface: P - Q is the vertical vector") {
        LatticeSurface f;
        f.window = LatticeWindow(-3, 3, -3, 3);
        f.H = 0;
        f.points = Field2<Vec3>(f.window);
        for (int m = -3; m <= 3; ++m)
            for (int n = -3; n <= 3; ++n) f.at(n, m) = Vec3(n, m, double(n) * m);
        const auto lines = proper::affine_normal_lines(f);
        for (int m = -3; m < 3; ++m)
            for (int n = -3; n < 3; ++n) {
                const auto& l = lines.at(n, m);
                CHECK((l.P - l.Q - Vec3(0, 0, 1)).norm() <= 1e-13);
                CHECK_FALSE(l.degenerate);
            }
    }
    SUBCASE("constant surface is degenerate") {
        LatticeSurface f;
        f.window = LatticeWindow(0, 2, 0, 2);
        f.points = Field2<Vec3>(f.window, Vec3(1, 2, 3));
        const auto lines = proper::affine_normal_lines(f);
        CHECK(lines.at(0, 0).degenerate);
    }
    SUBCASE("proper build: lines pass near one common point") {
        PotentialData p = ones(0.1, 0.1, -1, -1, 6);
        const auto build = proper::build_discrete_proper(p, 1.0, LatticeWindow(0, 4, 0, 4), 12);
        const auto lines = proper::affine_normal_lines(build.surface);
        // direction parallel to Q up to the global gauge: P x Q stays small
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) {
                const auto& l = lines.at(n, m);
                const Vec3 d = l.P - l.Q;
                CHECK(d.cross(l.Q).norm() <= 1e-7 * d.norm() * l.Q.norm());
            }
    }
}

TEST_CASE("largest big-cell extent reporting") {
    PotentialData p = ones(0.1, 0.1, -1, -1, 5);
    const int k = proper::largest_big_cell_extent(p, 12, 4);
    CHECK(k == 4);
}

TEST_CASE("thread cap does not change the result") {
    PotentialData p = ones(0.1, 0.1, -1, -1, 5);
    const LatticeWindow w(0, 4, 0, 4);
    setenv("AFFSPHERE_THREADS", "1", 1);
    const auto b1 = proper::build_discrete_proper(p, 1.0, w, 12);
    setenv("AFFSPHERE_THREADS", "4", 1);
    const auto b4 = proper::build_discrete_proper(p, 1.0, w, 12);
    unsetenv("AFFSPHERE_THREADS");
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; n <= 4; ++n) {
            CHECK(b1.surface.at(n, m).x() == b4.surface.at(n, m).x());
            CHECK(b1.surface.at(n, m).y() == b4.surface.at(n, m).y());
            CHECK(b1.surface.at(n, m).z() == b4.surface.at(n, m).z());
        }
}

TEST_CASE("improper data through the proper module path stays parallel") {
    // H = 0 surfaces run through affine_normal_lines: directions all parallel
    PotentialData p = ones(0.2, 0.2, 0, -4, 4);
    const auto [f, d] = improper::build_discrete_from_potentials(p, 1.0,
                                                                 LatticeWindow(-3, 3, -3, 3));
    const auto lines = proper::affine_normal_lines(f);
    for (int m = -3; m < 3; ++m)
        for (int n = -3; n < 3; ++n) {
            const auto& l = lines.at(n, m);
            if (l.degenerate) continue;
            const Vec3 dir = (l.P - l.Q).normalized();
            CHECK(std::abs(std::abs(dir.z()) - 1.0) <= 1e-8);
        }
}
