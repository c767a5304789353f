#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affsphere/lattice.hpp"

#include <random>

using namespace affsphere;

TEST_CASE("signed sum follows the three-case convention") {
    auto anything = [](int k) { return 1000.0 * k + 7.0; };
    CHECK(signed_sum(anything, 0) == 0.0);

    auto id = [](int k) { return double(k); };
    CHECK(signed_sum(id, 3) == doctest::Approx(6.0));

    auto ones = [](int) { return 1.0; };
    CHECK(signed_sum(ones, -2) == doctest::Approx(-2.0));
    CHECK(signed_sum(ones, 5) == doctest::Approx(5.0));
}

TEST_CASE("signed sum telescopes") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> coin(-9, 9);
    Field1<double> x(-12, 12);
    for (int k = -12; k <= 12; ++k) x.at(k) = coin(rng);
    for (int n = -11; n <= 12; ++n)
        CHECK(signed_sum(x, n) - signed_sum(x, n - 1) == doctest::Approx(x.at(n)).epsilon(1e-14));
}

TEST_CASE("summation by parts holds exactly for integer sequences") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coin(-9, 9);
    for (int rep = 0; rep < 25; ++rep) {
        Field1<double> x(-10, 10), y(-10, 10);
        for (int k = -10; k <= 10; ++k) {
            x.at(k) = coin(rng);
            y.at(k) = coin(rng);
        }
        for (int n = -8; n <= 8; ++n) {
            const double lhs =
                signed_sum([&](int k) { return x.at(k) * (y.at(k) - y.at(k - 1)); }, n);
            const double rhs =
                -x.at(0) * y.at(0) + x.at(n) * y.at(n) -
                signed_sum([&](int k) { return (x.at(k) - x.at(k - 1)) * y.at(k - 1); }, n);
            CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
    }
}

TEST_CASE("signed sum reports the missing index") {
    Field1<double> x(0, 3);
    for (int k = 0; k <= 3; ++k) x.at(k) = 1.0;
    CHECK_THROWS_WITH_AS(signed_sum(x, 5), doctest::Contains("index out of range: 4"),
                         RangeError);
    CHECK_THROWS_AS(signed_sum(x, -2), RangeError);
}

namespace {

LatticeSurface bilinear_surface(int extent, double eps, double delta) {
    LatticeSurface f;
    f.window = LatticeWindow(-extent, extent, -extent, extent);
    f.eps = eps;
    f.delta = delta;
    f.H = 0;
    f.points = Field2<Vec3>(f.window);
    for (int m = -extent; m <= extent; ++m)
        for (int n = -extent; n <= extent; ++n)
            f.at(n, m) = Vec3(eps * n, delta * m, eps * delta * n * m);
    return f;
}

}  // namespace

TEST_CASE("second mixed difference of the bilinear surface") {
    const LatticeSurface f = bilinear_surface(3, 1.0, 1.0);
    for (int m = -3; m < 3; ++m)
        for (int n = -3; n < 3; ++n)
            CHECK((second_mixed_difference(f, n, m) - Vec3(0, 0, 1)).norm() <= 1e-14);
}

TEST_CASE("second mixed difference of a constant surface vanishes") {
    LatticeSurface f;
    f.window = LatticeWindow(0, 2, 0, 2);
    f.points = Field2<Vec3>(f.window, Vec3(3, -1, 2));
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            CHECK(second_mixed_difference(f, n, m).norm() == 0.0);
    CHECK_THROWS_AS(second_mixed_difference(f, 2, 0), RangeError);
}

TEST_CASE("discrete circle mixed difference is vertical") {
    // eps = delta = 1, q1 = q2 = 2 gives theta*eps = pi/2
    const double th = 3.14159265358979323846 / 2.0;
    LatticeSurface f;
    f.window = LatticeWindow(-2, 2, -2, 2);
    f.points = Field2<Vec3>(f.window);
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n)
            f.at(n, m) = Vec3(std::cos(th * n) + std::cos(th * m),
                              std::sin(th * n) + std::sin(th * m),
                              -std::sin(th * (n - m)) + n - m);
    const Vec3 md = second_mixed_difference(f, 0, 0);
    CHECK(std::abs(md.x()) <= 1e-14);
    CHECK(std::abs(md.y()) <= 1e-14);
}

TEST_CASE("curve sampler derivative consistency check") {
    SmoothCurveSampler good{
        [](double t) { return Vec2(std::cos(t), std::sin(t)); },
        [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
        [](double t) { return Vec2(-std::cos(t), -std::sin(t)); }};
    CHECK(sampler_derivative_residual(good, {0.0, 0.3, -1.1, 2.7}) < 1e-5);

    SmoothCurveSampler bad = good;
    bad.d1 = [](double t) { return Vec2(std::sin(t), std::cos(t)); };
    CHECK(sampler_derivative_residual(bad, {0.3}) > 1e-2);
}

TEST_CASE("windows and fields guard their bounds") {
    CHECK_THROWS_AS(LatticeWindow(3, 2, 0, 0), std::invalid_argument);
    Field2<double> f(LatticeWindow(-1, 1, -1, 1), 0.0);
    CHECK_THROWS_AS(f.at(2, 0), RangeError);
    CHECK_THROWS_AS((DiscreteCurve{1.0, Field1<Vec2>(1, 3)}), std::invalid_argument);
}
