#include "affsphere/gallery.hpp"

#include <cmath>

namespace affsphere::gallery {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSnap = 1e-9;

double det2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int floordiv(int a, int b) {
    int q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

bool near_multiple(double x, double period, double tol = kSnap) {
    const double k = std::round(x / period);
    return std::abs(x - k * period) < tol;
}

/// Ceiling with lattice-aligned arguments snapped to the nearest integer.
double ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < kSnap) return r;
    return std::ceil(x);
}

LatticeSurface make_surface(const LatticeWindow& w, double eps, double delta,
                            const std::function<Vec3(int, int)>& f) {
    LatticeSurface s;
    s.window = w;
    s.eps = eps;
    s.delta = delta;
    s.H = 0;
    s.points = Field2<Vec3>(w);
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) s.at(n, m) = f(n, m);
    return s;
}

SurfaceData make_data(const LatticeWindow& w, const std::function<double(int, int)>& omega,
                      const std::function<double(int)>& A, const std::function<double(int)>& B) {
    SurfaceData d;
    d.omega = Field2<double>(w);
    d.g = Field2<double>(w, 1.0);
    d.A = Field1<double>(w.n_min, w.n_max);
    d.B = Field1<double>(w.m_min, w.m_max);
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) d.omega.at(n, m) = omega(n, m);
    for (int n = w.n_min; n <= w.n_max; ++n) d.A.at(n) = A(n);
    for (int m = w.m_min; m <= w.m_max; ++m) d.B.at(m) = B(m);
    flag_singular_sites(d);
    return d;
}

SmoothCurveSampler circle_sampler() {
    return {[](double t) { return Vec2(std::cos(t), std::sin(t)); },
            [](double t) { return Vec2(-std::sin(t), std::cos(t)); },
            [](double t) { return Vec2(-std::cos(t), -std::sin(t)); }};
}

SmoothCurveSampler square_sampler() {
    return {[](double t) {
                return Vec2(std::abs(std::cos(t)) * std::cos(t),
                            std::abs(std::sin(t)) * std::sin(t));
            },
            [](double t) {
                return Vec2(-2.0 * std::abs(std::cos(t)) * std::sin(t),
                            2.0 * std::abs(std::sin(t)) * std::cos(t));
            },
            [](double t) {
                return Vec2(2.0 * std::cos(2.0 * t) * -sign_of(std::cos(t), kSnap),
                            2.0 * std::cos(2.0 * t) * sign_of(std::sin(t), kSnap));
            }};
}

SmoothCurveSampler genus1_sampler() {
    return {[](double t) {
                const double c = std::cos(t);
                return Vec2(c * (0.5 + c * c), 2.0 * c * std::sin(t));
            },
            [](double t) {
                const double c = std::cos(t), s = std::sin(t);
                return Vec2(-s * (0.5 + 3.0 * c * c), 2.0 * std::cos(2.0 * t));
            },
            [](double t) {
                const double c = std::cos(t), s = std::sin(t);
                return Vec2(-c * (0.5 + 3.0 * c * c) + 6.0 * c * s * s,
                            -4.0 * std::sin(2.0 * t));
            }};
}

}  // namespace

ExampleBundle smooth_circle(const GridSpec& gu, const GridSpec& gv) {
    ExampleBundle b;
    b.smooth = true;
    b.note = "smooth circle example";
    b.s1 = circle_sampler();
    b.s2 = circle_sampler();
    b.ugrid = gu;
    b.vgrid = gv;
    const LatticeWindow w(gu.i_min, gu.i_max, gv.i_min, gv.i_max);
    b.surface = make_surface(w, gu.step, gv.step, [&](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        return Vec3(std::cos(u) + std::cos(v), std::sin(u) + std::sin(v),
                    u - v - std::sin(u - v));
    });
    b.data = make_data(
        w,
        [&](int i, int j) { return std::sin(gv.value(j) - gu.value(i)); },
        [](int) { return 1.0; }, [](int) { return -1.0; });
    b.singular = [gu, gv](int i, int j) {
        return near_multiple(gu.value(i) - gv.value(j), kPi);
    };
    return b;
}

ExampleBundle smooth_square(const GridSpec& gu, const GridSpec& gv) {
    ExampleBundle b;
    b.smooth = true;
    b.note = "smooth square example";
    b.s1 = square_sampler();
    b.s2 = square_sampler();
    b.ugrid = gu;
    b.vgrid = gv;
    auto itg = [](double u) {
        // int_0^u |sin 2k| dk, with the sign snapped at the corner points
        const double sg = sign_of(std::sin(2.0 * u), kSnap);
        return ceil_snapped(2.0 * u / kPi) - 0.5 * sg * (std::cos(2.0 * u) + sg);
    };
    const LatticeWindow w(gu.i_min, gu.i_max, gv.i_min, gv.i_max);
    b.surface = make_surface(w, gu.step, gv.step, [&](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
        const double z = std::abs(cu * sv) * cu * sv - std::abs(cv * su) * cv * su +
                         itg(u) - itg(v);
        return Vec3(std::abs(cu) * cu + std::abs(cv) * cv, std::abs(su) * su + std::abs(sv) * sv,
                    z);
    });
    b.data = make_data(
        w,
        [&](int i, int j) {
            const double u = gu.value(i), v = gv.value(j);
            const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
            return 4.0 * (std::abs(cv * su) * cu * sv - std::abs(cu * sv) * cv * su);
        },
        [](int) { return 0.0; }, [](int) { return 0.0; });
    b.singular = [gu, gv](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        if (near_multiple(u, kPi / 2.0) || near_multiple(v, kPi / 2.0)) return true;
        const auto cu = static_cast<long long>(ceil_snapped(2.0 * u / kPi));
        const auto cv = static_cast<long long>(ceil_snapped(2.0 * v / kPi));
        return ((cu - cv) % 2) == 0;
    };
    return b;
}

ExampleBundle smooth_genus1(const GridSpec& gu, const GridSpec& gv) {
    ExampleBundle b;
    b.smooth = true;
    b.note = "smooth genus-1 example";
    b.s1 = genus1_sampler();
    b.s2 = genus1_sampler();
    b.ugrid = gu;
    b.vgrid = gv;
    auto itg = [](double t) {
        return 2.5 * std::sin(t) + 5.0 / 24.0 * std::sin(3.0 * t) - std::sin(5.0 * t) / 40.0;
    };
    const LatticeWindow w(gu.i_min, gu.i_max, gv.i_min, gv.i_max);
    b.surface = make_surface(w, gu.step, gv.step, [&](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        const double x = (1.0 + 0.5 * std::cos(2.0 * u)) * std::cos(u) +
                         (1.0 + 0.5 * std::cos(2.0 * v)) * std::cos(v);
        const double y = std::sin(2.0 * u) + std::sin(2.0 * v);
        const double z = -std::cos(u) * std::cos(v) * (std::sin(u) - std::sin(v)) *
                             (3.0 + 2.0 * std::sin(u) * std::sin(v)) +
                         itg(u) - itg(v);
        return Vec3(x, y, z);
    });
    auto acoef = [](double t) {
        return 0.5 * (19.0 - 8.0 * std::cos(2.0 * t) + 3.0 * std::cos(4.0 * t)) * std::cos(t);
    };
    b.data = make_data(
        w,
        [&](int i, int j) {
            const double u = gu.value(i), v = gv.value(j);
            return -(std::sin(u) - std::sin(v)) *
                   (4.0 + 8.0 * std::sin(u) * std::sin(v) +
                    3.0 * std::cos(2.0 * u) * std::cos(2.0 * v));
        },
        [&](int i) { return acoef(gu.value(i)); }, [&](int j) { return -acoef(gv.value(j)); });
    b.singular = [gu, gv](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        if (near_multiple(v - u, 2.0 * kPi) || near_multiple(v + u - kPi, 2.0 * kPi)) return true;
        return std::abs(4.0 + 8.0 * std::sin(u) * std::sin(v) +
                        3.0 * std::cos(2.0 * u) * std::cos(2.0 * v)) < kSnap;
    };
    return b;
}

ExampleBundle smooth_graph(const GraphFunction& P, const GraphFunction& R, const GridSpec& gu,
                           const GridSpec& gv) {
    ExampleBundle b;
    b.smooth = true;
    b.note = "smooth graph example";
    b.s1 = {[P](double u) { return Vec2(u, P.d1(u)); },
            [P](double u) { return Vec2(1.0, P.d2(u)); },
            [P](double u) { return Vec2(0.0, P.d3(u)); }};
    b.s2 = {[R](double v) { return Vec2(R.d1(v), v); },
            [R](double v) { return Vec2(R.d2(v), 1.0); },
            [R](double v) { return Vec2(R.d3(v), 0.0); }};
    b.ugrid = gu;
    b.vgrid = gv;
    const double z0 = 2.0 * (P.f(0.0) + R.f(0.0));
    const LatticeWindow w(gu.i_min, gu.i_max, gv.i_min, gv.i_max);
    b.surface = make_surface(w, gu.step, gv.step, [&](int i, int j) {
        const double u = gu.value(i), v = gv.value(j);
        const double x = u + R.d1(v), y = v + P.d1(u);
        return Vec3(x, y, x * y - 2.0 * (P.f(u) + R.f(v) + P.d1(u) * R.d1(v)) + z0);
    });
    b.data = make_data(
        w,
        [&](int i, int j) { return 1.0 - P.d2(gu.value(i)) * R.d2(gv.value(j)); },
        [&](int i) { return P.d3(gu.value(i)); }, [&](int j) { return R.d3(gv.value(j)); });
    b.singular = [gu, gv, P, R](int i, int j) {
        return std::abs(1.0 - P.d2(gu.value(i)) * R.d2(gv.value(j))) < kSnap;
    };
    return b;
}

ExampleBundle discrete_circle(double q1, double q2, double eps, double delta,
                              const LatticeWindow& w) {
    if (!(q1 > 0.0) || !(q2 > 0.0))
        throw std::invalid_argument("discrete_circle: q1, q2 must be positive");
    ExampleBundle b;
    b.note = "discrete circle example";
    const double th1 = 2.0 / eps * std::atan(0.5 * eps * q1);
    const double th2 = 2.0 / delta * std::atan(0.5 * delta * q2);
    b.d1 = sample_curve([&](double t) { return Vec2(std::cos(t), std::sin(t)); },
                        th1 * eps, w.n_min - 1, w.n_max + 1);
    b.d2 = sample_curve([&](double t) { return Vec2(std::cos(t), std::sin(t)); },
                        th2 * delta, w.m_min - 1, w.m_max + 1);
    // the curve step is the lattice interval, not the angle increment
    b.d1.step = eps;
    b.d2.step = delta;
    b.surface = make_surface(w, eps, delta, [&](int n, int m) {
        const double A = th1 * eps * n, B = th2 * delta * m;
        return Vec3(std::cos(A) + std::cos(B), std::sin(A) + std::sin(B),
                    -std::sin(A - B) + n * std::sin(th1 * eps) - m * std::sin(th2 * delta));
    });
    const double pref =
        4.0 * q1 * q2 / (std::sqrt(4.0 + eps * eps * q1 * q1) * std::sqrt(4.0 + delta * delta * q2 * q2));
    const double An = 16.0 * q1 * q1 * q1 / std::pow(4.0 + eps * eps * q1 * q1, 2);
    const double Bm = -16.0 * q2 * q2 * q2 / std::pow(4.0 + delta * delta * q2 * q2, 2);
    b.data = make_data(
        w,
        [&](int n, int m) {
            return pref *
                   std::sin(0.5 * delta * th2 * (2 * m + 1) - 0.5 * eps * th1 * (2 * n + 1));
        },
        [&](int) { return An; }, [&](int) { return Bm; });
    b.singular = [=](int n, int m) {
        return near_multiple(eps * th1 * (2 * n + 1) - delta * th2 * (2 * m + 1), 2.0 * kPi,
                             kSnap);
    };
    return b;
}

ExampleBundle discrete_square(int N1, int N2, double eps, double delta, const LatticeWindow& w) {
    if (N1 < 1 || N2 < 1)
        throw std::invalid_argument("discrete_square: N1, N2 must be positive integers");
    ExampleBundle b;
    b.note = "discrete square example";
    const double t1 = kPi / (2.0 * N1);  // theta1 * eps
    const double t2 = kPi / (2.0 * N2);
    auto curve = [](double t) {
        return Vec2(std::abs(std::cos(t)) * std::cos(t), std::abs(std::sin(t)) * std::sin(t));
    };
    b.d1 = sample_curve(curve, t1, w.n_min - 1, w.n_max + 1);
    b.d2 = sample_curve(curve, t2, w.m_min - 1, w.m_max + 1);
    b.d1.step = eps;
    b.d2.step = delta;
    b.surface = make_surface(w, eps, delta, [&](int n, int m) {
        const double cn = std::cos(n * t1), sn = std::sin(n * t1);
        const double cm = std::cos(m * t2), sm = std::sin(m * t2);
        const int fn = floordiv(n, N1), fm = floordiv(m, N2);
        const double z = std::abs(cn * sm) * cn * sm - std::abs(sn * cm) * sn * cm + fn - fm -
                         0.5 * ((fn % 2 == 0 ? 1.0 : -1.0) * std::cos(2.0 * n * t1) -
                                (fm % 2 == 0 ? 1.0 : -1.0) * std::cos(2.0 * m * t2));
        return Vec3(std::abs(cn) * cn + std::abs(cm) * cm, std::abs(sn) * sn + std::abs(sm) * sm,
                    z);
    });
    const double s1 = std::sin(t1), s2 = std::sin(t2);
    b.data = make_data(
        w,
        [&](int n, int m) {
            const double a = 0.25 * (2 * n + 1) * kPi / N1, bb = 0.25 * (2 * m + 1) * kPi / N2;
            const double x = std::sin(a) * std::cos(bb), y = std::cos(a) * std::sin(bb);
            return 4.0 / (eps * delta) * s1 * s2 * (std::abs(x) * y - std::abs(y) * x);
        },
        [&](int n) { return n % N1 == 0 ? 2.0 / (eps * eps * eps) * std::pow(s1, 4) : 0.0; },
        [&](int m) { return m % N2 == 0 ? -2.0 / (delta * delta * delta) * std::pow(s2, 4) : 0.0; });
    b.singular = [N1, N2](int n, int m) {
        return (floordiv(n, N1) - floordiv(m, N2)) % 2 == 0;
    };
    return b;
}

ExampleBundle discrete_genus1(int N, double eps, double delta, const LatticeWindow& w) {
    if (N < 1) throw std::invalid_argument("discrete_genus1: N must be a positive integer");
    ExampleBundle b;
    b.note = "discrete genus-1 example";
    const double t1 = kPi / N;  // theta1*eps = theta2*delta
    const double t2 = kPi / N;
    auto curve = [](double t) {
        const double c = std::cos(t);
        return Vec2(c * (0.5 + c * c), 2.0 * c * std::sin(t));
    };
    b.d1 = sample_curve(curve, t1, w.n_min - 1, w.n_max + 1);
    b.d2 = sample_curve(curve, t2, w.m_min - 1, w.m_max + 1);
    b.d1.step = eps;
    b.d2.step = delta;
    auto c1 = [](double t) { return 0.25 * (3.0 + 6.0 * std::cos(t) + std::cos(2.0 * t)); };
    auto c2 = [](double t) { return 5.0 / (8.0 * (1.0 + 2.0 * std::cos(t))); };
    auto c3 = [](double t) {
        return -1.0 / (8.0 * (1.0 + 2.0 * std::cos(t) + 2.0 * std::cos(2.0 * t)));
    };
    auto itg = [&](double t, double k) {
        return c1(t) * std::sin(k) + c2(t) * std::sin(3.0 * k) + c3(t) * std::sin(5.0 * k);
    };
    b.surface = make_surface(w, eps, delta, [&](int n, int m) {
        const double un = n * t1, vm = m * t2;
        const double x = (1.0 + 0.5 * std::cos(2.0 * un)) * std::cos(un) +
                         (1.0 + 0.5 * std::cos(2.0 * vm)) * std::cos(vm);
        const double y = std::sin(2.0 * un) + std::sin(2.0 * vm);
        const double z = -std::cos(un) * std::cos(vm) * (std::sin(un) - std::sin(vm)) *
                             (3.0 + 2.0 * std::sin(un) * std::sin(vm)) +
                         itg(t1, un) - itg(t2, vm);
        return Vec3(x, y, z);
    });
    auto a1 = [](double t) {
        return 7.0 + 9.0 * std::cos(2.0 * t) + 2.0 * std::cos(4.0 * t) + std::cos(6.0 * t);
    };
    auto a2 = [](double t) { return -6.0 - 2.0 * std::cos(2.0 * t); };
    auto a3 = [](double t) { return 1.0 + 2.0 * std::cos(2.0 * t); };
    auto W = [N](int n, int m) {
        const double sn = std::sin((2 * n + 1) * kPi / (2.0 * N));
        const double sm = std::sin((2 * m + 1) * kPi / (2.0 * N));
        return (3.0 + std::cos(kPi / N)) * (1.0 + 2.0 * sn * sm) +
               (1.0 + 2.0 * std::cos(kPi / N)) * std::cos((2 * n + 1) * kPi / N) *
                   std::cos((2 * m + 1) * kPi / N);
    };
    b.data = make_data(
        w,
        [&](int n, int m) {
            const double sn = std::sin((2 * n + 1) * kPi / (2.0 * N));
            const double sm = std::sin((2 * m + 1) * kPi / (2.0 * N));
            return -4.0 / (eps * delta) * std::pow(std::sin(kPi / (2.0 * N)), 2) *
                   std::cos(kPi / (2.0 * N)) * (sn - sm) * W(n, m);
        },
        [&](int n) {
            return 4.0 / (eps * eps * eps) * std::pow(std::sin(0.5 * t1), 3) *
                   std::cos(0.5 * t1) *
                   (a1(0.5 * t1) + a2(0.5 * t1) * std::cos(2.0 * t1 * n) +
                    a3(0.5 * t1) * std::cos(4.0 * t1 * n)) *
                   std::cos(t1 * n);
        },
        [&](int m) {
            return -4.0 / (delta * delta * delta) * std::pow(std::sin(0.5 * t2), 3) *
                   std::cos(0.5 * t2) *
                   (a1(0.5 * t2) + a2(0.5 * t2) * std::cos(2.0 * t2 * m) +
                    a3(0.5 * t2) * std::cos(4.0 * t2 * m)) *
                   std::cos(t2 * m);
        });
    b.singular = [N, W](int n, int m) {
        const int p = 2 * N;
        if (((m - n) % p + p) % p == 0) return true;
        if (((m + n - N + 1) % p + p) % p == 0) return true;
        return std::abs(W(n, m)) < kSnap;
    };
    return b;
}

ExampleBundle discrete_graph(const Field1<double>& P, const Field1<double>& R, double eps,
                             double delta, const LatticeWindow& w) {
    if (P.i_min() > w.n_min - 1 || P.i_max() < w.n_max + 2 || R.i_min() > w.m_min - 1 ||
        R.i_max() < w.m_max + 2)
        throw RangeError("discrete_graph: P needs [n_min-1, n_max+2], R likewise");
    ExampleBundle b;
    b.note = "discrete graph example";
    auto dP = [&](int n) { return (P.at(n + 1) - P.at(n)) / eps; };
    auto dR = [&](int m) { return (R.at(m + 1) - R.at(m)) / delta; };
    Field1<Vec2> p1(w.n_min - 1, w.n_max + 1);
    for (int n = p1.i_min(); n <= p1.i_max(); ++n) p1.at(n) = Vec2(eps * n, dP(n));
    Field1<Vec2> p2(w.m_min - 1, w.m_max + 1);
    for (int m = p2.i_min(); m <= p2.i_max(); ++m) p2.at(m) = Vec2(dR(m), delta * m);
    b.d1 = DiscreteCurve(eps, std::move(p1));
    b.d2 = DiscreteCurve(delta, std::move(p2));
    // constant offset: the plain product formula sits one translation away
    // from the representation-formula height
    const double z0 = P.at(1) + P.at(0) + R.at(1) + R.at(0);
    b.surface = make_surface(w, eps, delta, [&](int n, int m) {
        const double x = eps * n + dR(m), y = delta * m + dP(n);
        return Vec3(x, y, x * y - 2.0 * dP(n) * dR(m) - P.at(n + 1) - P.at(n) - R.at(m + 1) -
                              R.at(m) + z0);
    });
    b.data = make_data(
        w,
        [&](int n, int m) {
            return 1.0 - (P.at(n + 2) - 2.0 * P.at(n + 1) + P.at(n)) *
                             (R.at(m + 2) - 2.0 * R.at(m + 1) + R.at(m)) /
                             (eps * eps * delta * delta);
        },
        [&](int n) {
            return (P.at(n + 2) - 3.0 * P.at(n + 1) + 3.0 * P.at(n) - P.at(n - 1)) /
                   (eps * eps * eps);
        },
        [&](int m) {
            return (R.at(m + 2) - 3.0 * R.at(m + 1) + 3.0 * R.at(m) - R.at(m - 1)) /
                   (delta * delta * delta);
        });
    b.singular = [P, R, eps, delta, tol = b.data.sing_tol](int n, int m) {
        const double om = 1.0 - (P.at(n + 2) - 2.0 * P.at(n + 1) + P.at(n)) *
                                    (R.at(m + 2) - 2.0 * R.at(m + 1) + R.at(m)) /
                                    (eps * eps * delta * delta);
        return std::abs(om) < std::max(tol, kSnap);
    };
    return b;
}

verify::VerificationReport cross_check(const ExampleBundle& bundle) {
    verify::VerificationReport rep;
    const LatticeWindow& w = bundle.surface.window;

    LatticeSurface rebuilt;
    SurfaceData rdata;
    if (bundle.smooth) {
        auto [fs, ds] = improper::build_smooth_from_curves(bundle.s1, bundle.s2, bundle.ugrid,
                                                           bundle.vgrid);
        rebuilt = std::move(fs);
        rdata = std::move(ds);
    } else {
        auto [fd, dd] = improper::build_discrete_from_curves(bundle.d1, bundle.d2, w);
        rebuilt = std::move(fd);
        rdata = std::move(dd);
    }

    const double fscale = std::max(1.0, bundle.surface.diameter());
    verify::CheckResult cf;
    cf.name = "closed-form-f";
    cf.tolerance = 1e-9;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const double r = (bundle.surface.at(n, m) - rebuilt.at(n, m)).norm() / fscale;
            if (r > cf.residual) {
                cf.residual = r;
                cf.worst_n = n;
                cf.worst_m = m;
            }
        }
    cf.pass = cf.residual <= cf.tolerance;
    rep.add(cf);

    verify::CheckResult cd;
    cd.name = "closed-form-data";
    cd.tolerance = 1e-9;
    double omax = 0.0, amax = 1e-300, bmax = 1e-300;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n)
            omax = std::max(omax, std::abs(bundle.data.omega.at(n, m)));
    for (int n = w.n_min; n <= w.n_max; ++n) amax = std::max(amax, std::abs(bundle.data.A.at(n)));
    for (int m = w.m_min; m <= w.m_max; ++m) bmax = std::max(bmax, std::abs(bundle.data.B.at(m)));
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            if (bundle.data.is_singular(n, m)) continue;
            double r = std::abs(bundle.data.omega.at(n, m) - rdata.omega.at(n, m)) /
                       std::max(1.0, omax);
            r = std::max(r, std::abs(bundle.data.A.at(n) - rdata.A.at(n)) / std::max(1.0, amax));
            r = std::max(r, std::abs(bundle.data.B.at(m) - rdata.B.at(m)) / std::max(1.0, bmax));
            if (r > cd.residual) {
                cd.residual = r;
                cd.worst_n = n;
                cd.worst_m = m;
            }
        }
    cd.pass = cd.residual <= cd.tolerance;
    rep.add(cd);

    verify::CheckResult cs;
    cs.name = "singular-set-match";
    cs.tolerance = 0.5;  // residual counts mismatching sites
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const bool predicted = bundle.singular(n, m);
            const bool observed = std::abs(rdata.omega.at(n, m)) <
                                  std::max(rdata.sing_tol, 1e-12 * std::max(1.0, omax));
            if (predicted != observed) {
                cs.residual += 1.0;
                cs.worst_n = n;
                cs.worst_m = m;
            }
        }
    cs.pass = cs.residual <= cs.tolerance;
    rep.add(cs);

    if (!bundle.smooth) {
        const auto suite = verify::full_suite(rebuilt, &rdata, 1.0);
        for (const auto& c : suite.checks) rep.add(c);
    }
    return rep;
}

AreaCheck shoelace_area_check(const DiscreteCurve& gamma, int n, int m) {
    AreaCheck out;
    out.z = det2(gamma.at(n), gamma.at(m)) +
            signed_sum([&](int k) { return det2(gamma.at(k - 1), gamma.at(k)); }, n) -
            signed_sum([&](int k) { return det2(gamma.at(k - 1), gamma.at(k)); }, m);
    if (n == m) return out;
    const int step = n > m ? 1 : -1;
    double twice_area = 0.0;
    for (int k = m; k != n; k += step) twice_area += det2(gamma.at(k), gamma.at(k + step));
    twice_area += det2(gamma.at(n), gamma.at(m));
    out.area = 0.5 * twice_area;
    out.ratio = out.area != 0.0 ? out.z / out.area : 0.0;
    return out;
}

namespace {

/// z(u, v) of the one-curve surface, with the arc integral by composite
/// Simpson over `panels` subintervals.
double one_curve_height(const SmoothCurveSampler& g, double u, double v, int panels = 512) {
    auto integrand = [&](double k) { return det2(g.value(k), g.d1(k)); };
    const double h = (u - v) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = v + i * h;
        acc += h / 6.0 * (integrand(x0) + 4.0 * integrand(x0 + 0.5 * h) + integrand(x0 + h));
    }
    return det2(g.value(u), g.value(v)) + acc;
}

}  // namespace

double monge_ampere_residual(const SmoothCurveSampler& gamma, double u0, double v0, double h) {
    const Vec2 x0 = gamma.value(u0) + gamma.value(v0);
    // psi(x, y) by Newton inversion of (u, v) -> gamma(u) + gamma(v)
    auto psi = [&](double x, double y) {
        double u = u0, v = v0;
        const Vec2 target(x, y);
        for (int it = 0; it < 60; ++it) {
            const Vec2 r = gamma.value(u) + gamma.value(v) - target;
            if (r.norm() < 1e-14) break;
            Eigen::Matrix2d J;
            J.col(0) = gamma.d1(u);
            J.col(1) = gamma.d1(v);
            const Vec2 step = J.partialPivLu().solve(r);
            u -= step(0);
            v -= step(1);
        }
        return one_curve_height(gamma, u, v);
    };
    const double pxx = (psi(x0.x() + h, x0.y()) - 2.0 * psi(x0.x(), x0.y()) +
                        psi(x0.x() - h, x0.y())) /
                       (h * h);
    const double pyy = (psi(x0.x(), x0.y() + h) - 2.0 * psi(x0.x(), x0.y()) +
                        psi(x0.x(), x0.y() - h)) /
                       (h * h);
    const double pxy = (psi(x0.x() + h, x0.y() + h) - psi(x0.x() + h, x0.y() - h) -
                        psi(x0.x() - h, x0.y() + h) + psi(x0.x() - h, x0.y() - h)) /
                       (4.0 * h * h);
    return pxx * pyy - pxy * pxy;
}

double liouville_pde_residual(const Field2<double>& omega, const Field1<double>& A,
                              const Field1<double>& B, double hu, double hv,
                              double omega_cutoff) {
    const LatticeWindow& w = omega.window();
    double worst = 0.0;
    for (int j = w.m_min + 1; j < w.m_max; ++j)
        for (int i = w.n_min + 1; i < w.n_max; ++i) {
            bool ok = true;
            for (int dj = -1; dj <= 1 && ok; ++dj)
                for (int di = -1; di <= 1 && ok; ++di)
                    ok = std::abs(omega.at(i + di, j + dj)) > omega_cutoff;
            if (!ok) continue;
            auto lg = [&](int a, int b) { return std::log(std::abs(omega.at(a, b))); };
            const double mixed = (lg(i + 1, j + 1) - lg(i + 1, j - 1) - lg(i - 1, j + 1) +
                                  lg(i - 1, j - 1)) /
                                 (4.0 * hu * hv);
            const double om = omega.at(i, j);
            worst = std::max(worst, std::abs(mixed + A.at(i) * B.at(j) / (om * om)));
        }
    return worst;
}

}  // namespace affsphere::gallery
