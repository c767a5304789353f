#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Lattice windows, index fields, discrete/smooth plane curves and the signed
// summation calculus used throughout.  Negative indices are first-class:
// every field stores a dense array with an explicit offset.

namespace affsphere {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct RangeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Inclusive rectangle of lattice sites, bounds may be negative.
struct LatticeWindow {
    int n_min = 0, n_max = 0, m_min = 0, m_max = 0;

    LatticeWindow() = default;
    LatticeWindow(int n0, int n1, int m0, int m1)
        : n_min(n0), n_max(n1), m_min(m0), m_max(m1) {
        if (n_min > n_max || m_min > m_max)
            throw std::invalid_argument("LatticeWindow: empty bounds");
    }

    int n_count() const { return n_max - n_min + 1; }
    int m_count() const { return m_max - m_min + 1; }
    bool contains(int n, int m) const {
        return n >= n_min && n <= n_max && m >= m_min && m <= m_max;
    }
    /// Window shrunk by `k` on all four sides.
    LatticeWindow inset(int k) const {
        return LatticeWindow(n_min + k, n_max - k, m_min + k, m_max - k);
    }
};

/// Dense map integer -> T on a contiguous index interval.
template <class T>
class Field1 {
public:
    Field1() = default;
    Field1(int i_min, int i_max, const T& fill = T{})
        : i_min_(i_min), v_(static_cast<size_t>(i_max - i_min + 1), fill) {
        if (i_max < i_min) throw std::invalid_argument("Field1: empty range");
    }

    int i_min() const { return i_min_; }
    int i_max() const { return i_min_ + static_cast<int>(v_.size()) - 1; }
    bool contains(int i) const { return i >= i_min() && i <= i_max(); }

    T& at(int i) {
        check(i);
        return v_[static_cast<size_t>(i - i_min_)];
    }
    const T& at(int i) const {
        check(i);
        return v_[static_cast<size_t>(i - i_min_)];
    }
    T& operator()(int i) { return at(i); }
    const T& operator()(int i) const { return at(i); }

private:
    void check(int i) const {
        if (!contains(i))
            throw RangeError("index out of range: " + std::to_string(i) +
                             " not in [" + std::to_string(i_min()) + "," +
                             std::to_string(i_max()) + "]");
    }
    int i_min_ = 0;
    std::vector<T> v_;
};

/// Dense map (n, m) -> T over a LatticeWindow.
template <class T>
class Field2 {
public:
    Field2() = default;
    explicit Field2(const LatticeWindow& w, const T& fill = T{})
        : w_(w),
          v_(static_cast<size_t>(w.n_count()) * static_cast<size_t>(w.m_count()), fill) {}

    const LatticeWindow& window() const { return w_; }

    T& at(int n, int m) {
        check(n, m);
        return v_[idx(n, m)];
    }
    const T& at(int n, int m) const {
        check(n, m);
        return v_[idx(n, m)];
    }
    T& operator()(int n, int m) { return at(n, m); }
    const T& operator()(int n, int m) const { return at(n, m); }

private:
    size_t idx(int n, int m) const {
        return static_cast<size_t>(m - w_.m_min) * static_cast<size_t>(w_.n_count()) +
               static_cast<size_t>(n - w_.n_min);
    }
    void check(int n, int m) const {
        if (!w_.contains(n, m))
            throw RangeError("site out of window: (" + std::to_string(n) + "," +
                             std::to_string(m) + ")");
    }
    LatticeWindow w_;
    std::vector<T> v_;
};

/// Planar polyline indexed by a contiguous integer interval containing 0,
/// with a step size (the lattice interval epsilon or delta).
struct DiscreteCurve {
    double step = 1.0;
    Field1<Vec2> points;

    DiscreteCurve() = default;
    DiscreteCurve(double step_, Field1<Vec2> pts) : step(step_), points(std::move(pts)) {
        if (!(step > 0.0)) throw std::invalid_argument("DiscreteCurve: step must be positive");
        if (!points.contains(0))
            throw std::invalid_argument("DiscreteCurve: index range must contain 0");
    }

    const Vec2& at(int i) const { return points.at(i); }
};

/// Sample a parametric plane curve into a DiscreteCurve on [i_min, i_max].
inline DiscreteCurve sample_curve(const std::function<Vec2(double)>& gamma, double step,
                                  int i_min, int i_max) {
    Field1<Vec2> pts(i_min, i_max);
    for (int i = i_min; i <= i_max; ++i) pts.at(i) = gamma(step * i);
    return DiscreteCurve(step, std::move(pts));
}

/// Plane curve given by evaluator plus first/second derivative evaluators.
struct SmoothCurveSampler {
    std::function<Vec2(double)> value;
    std::function<Vec2(double)> d1;
    std::function<Vec2(double)> d2;
};

/// Max relative disagreement between supplied derivatives and central
/// differences of the evaluator at the probe points (h = 1e-4).
double sampler_derivative_residual(const SmoothCurveSampler& s,
                                   const std::vector<double>& probes);

/// Uniform parameter grid u_i = step * i, i in [i_min, i_max]; must contain 0.
struct GridSpec {
    double step = 1.0;
    int i_min = 0, i_max = 0;

    GridSpec() = default;
    GridSpec(double step_, int i0, int i1) : step(step_), i_min(i0), i_max(i1) {
        if (!(step > 0.0)) throw std::invalid_argument("GridSpec: step must be positive");
        if (i_min > 0 || i_max < 0)
            throw std::invalid_argument("GridSpec: grid must contain 0");
    }
    double value(int i) const { return step * i; }
    int count() const { return i_max - i_min + 1; }
};

/// Rectangular patch of lattice sites mapped to 3-space.
struct LatticeSurface {
    LatticeWindow window;
    double eps = 1.0;
    double delta = 1.0;
    int H = 0;  // 0 (improper) or -1 (proper)
    Vec3 xi0 = Vec3(0, 0, 1);
    Field2<Vec3> points;

    const Vec3& at(int n, int m) const { return points.at(n, m); }
    Vec3& at(int n, int m) { return points.at(n, m); }

    bool finite() const {
        for (int m = window.m_min; m <= window.m_max; ++m)
            for (int n = window.n_min; n <= window.n_max; ++n)
                if (!points.at(n, m).allFinite()) return false;
        return true;
    }

    double diameter() const;
};

/// The fields omega, A, B, g on a lattice window together with singular-site
/// flags (|omega| below sing_tol).  g = 2/(2 - eps*delta*H*omega); identically
/// 1 in the improper case.
struct SurfaceData {
    Field2<double> omega;
    Field1<double> A;
    Field1<double> B;
    Field2<double> g;
    Field2<std::uint8_t> singular;
    double sing_tol = 0.0;

    bool is_singular(int n, int m) const { return singular.at(n, m) != 0; }
};

/// Flag sites with |omega| < 1e-9 * max|omega| as singular.
void flag_singular_sites(SurfaceData& d);

/// Signed summation: sum_{k=1}^{n} x_k for n >= 1, zero for n = 0, and
/// -sum_{k=n+1}^{0} x_k for n <= -1.
template <class F>
double signed_sum(F&& x, int n) {
    double acc = 0.0;
    if (n >= 1) {
        for (int k = 1; k <= n; ++k) acc += x(k);
    } else if (n <= -1) {
        for (int k = n + 1; k <= 0; ++k) acc -= x(k);
    }
    return acc;
}

inline double signed_sum(const Field1<double>& x, int n) {
    return signed_sum([&](int k) { return x.at(k); }, n);
}

/// (f^{m+1}_{n+1} - f^m_{n+1} - f^{m+1}_n + f^m_n) / (eps*delta).
inline Vec3 second_mixed_difference(const LatticeSurface& f, int n, int m) {
    const Vec3 d = f.at(n + 1, m + 1) - f.at(n + 1, m) - f.at(n, m + 1) + f.at(n, m);
    return d / (f.eps * f.delta);
}

inline double sampler_derivative_residual_impl(const SmoothCurveSampler& s, double t) {
    const double h = 1e-4;
    const Vec2 fd1 = (s.value(t + h) - s.value(t - h)) / (2 * h);
    const Vec2 fd2 = (s.value(t + h) - 2 * s.value(t) + s.value(t - h)) / (h * h);
    const double s1 = std::max(1.0, s.d1(t).norm());
    const double s2 = std::max(1.0, s.d2(t).norm());
    return std::max((fd1 - s.d1(t)).norm() / s1, (fd2 - s.d2(t)).norm() / s2);
}

inline double sampler_derivative_residual(const SmoothCurveSampler& s,
                                          const std::vector<double>& probes) {
    double worst = 0.0;
    for (double t : probes) worst = std::max(worst, sampler_derivative_residual_impl(s, t));
    return worst;
}

inline double LatticeSurface::diameter() const {
    Vec3 lo = points.at(window.n_min, window.m_min);
    Vec3 hi = lo;
    for (int m = window.m_min; m <= window.m_max; ++m)
        for (int n = window.n_min; n <= window.n_max; ++n) {
            lo = lo.cwiseMin(points.at(n, m));
            hi = hi.cwiseMax(points.at(n, m));
        }
    return (hi - lo).norm();
}

inline void flag_singular_sites(SurfaceData& d) {
    const LatticeWindow& w = d.omega.window();
    double omax = 0.0;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n)
            omax = std::max(omax, std::abs(d.omega.at(n, m)));
    d.sing_tol = 1e-9 * omax;
    d.singular = Field2<std::uint8_t>(w, 0);
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n)
            if (std::abs(d.omega.at(n, m)) < d.sing_tol) d.singular.at(n, m) = 1;
}

}  // namespace affsphere
