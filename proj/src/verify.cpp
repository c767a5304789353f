#include "affsphere/verify.hpp"

#include "affsphere/improper.hpp"

#include <Eigen/SVD>

#include <cstdio>
#include <sstream>

namespace affsphere::verify {

namespace {

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Vec3 xi_at(const LatticeSurface& f, int n, int m) {
    // xi = -H (f^m_{n+1} + f^{m+1}_n)/2 + (1+H) xi0
    const double H = static_cast<double>(f.H);
    return -H * 0.5 * (f.at(n + 1, m) + f.at(n, m + 1)) + (1.0 + H) * f.xi0;
}

struct Fields {
    double omega, g;
};

}  // namespace

std::string VerificationReport::table() const {
    std::ostringstream os;
    os << "check                          residual      tolerance     worst      pass\n";
    for (const auto& c : checks) {
        const int used = static_cast<int>(std::to_string(c.worst_n).size() +
                                          std::to_string(c.worst_m).size());
        char line[160];
        std::snprintf(line, sizeof line, "%-30s %-13.6g %-13.6g (%d,%d)%*s %s\n", c.name.c_str(),
                      c.residual, c.tolerance, c.worst_n, c.worst_m, std::max(1, 9 - used), "",
                      c.pass ? "PASS" : "FAIL");
        os << line;
        if (!c.note.empty()) os << "    note: " << c.note << "\n";
    }
    os << "overall: " << (overall() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string VerificationReport::records() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << c.name << "\t" << fmt17(c.residual) << "\t(" << c.worst_n << "," << c.worst_m
           << ")\t" << fmt17(c.tolerance) << "\t" << (c.pass ? "pass" : "fail") << "\n";
    return os.str();
}

CheckResult check_coplanarity(const LatticeSurface& f, const Tolerances& tol) {
    CheckResult r;
    r.name = "coplanarity";
    r.tolerance = tol.coplanarity;
    const LatticeWindow& w = f.window;
    if (w.n_count() < 3 || w.m_count() < 3)
        throw RangeError("check_coplanarity: no interior sites");
    for (int m = w.m_min + 1; m < w.m_max; ++m)
        for (int n = w.n_min + 1; n < w.n_max; ++n) {
            Eigen::Matrix<double, 3, 4> D;
            D.col(0) = f.at(n + 1, m) - f.at(n, m);
            D.col(1) = f.at(n - 1, m) - f.at(n, m);
            D.col(2) = f.at(n, m + 1) - f.at(n, m);
            D.col(3) = f.at(n, m - 1) - f.at(n, m);
            Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(D);
            const auto& sv = svd.singularValues();
            const double res = sv(0) > 0.0 ? sv(2) / sv(0) : 0.0;
            if (res > r.residual) {
                r.residual = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_normal_condition(const LatticeSurface& f, const Tolerances& tol) {
    CheckResult r;
    const LatticeWindow& w = f.window;
    if (w.n_count() < 2 || w.m_count() < 2)
        throw RangeError("check_normal_condition: no cells");
    int degenerate = 0;
    if (f.H == 0) {
        r.name = "normal-parallel";
        r.tolerance = tol.normal_parallel;
        const Vec3 axis = f.xi0.normalized();
        for (int m = w.m_min; m < w.m_max; ++m)
            for (int n = w.n_min; n < w.n_max; ++n) {
                const Vec3 P = f.at(n + 1, m + 1) + f.at(n, m);
                const Vec3 Q = f.at(n + 1, m) + f.at(n, m + 1);
                Vec3 d = P - Q;
                const double len = d.norm();
                if (len < 1e-14 * std::max(1.0, f.diameter())) {
                    ++degenerate;
                    continue;
                }
                d /= len;
                const double res = (d - axis * d.dot(axis)).norm();
                if (res > r.residual) {
                    r.residual = res;
                    r.worst_n = n;
                    r.worst_m = m;
                }
            }
    } else {
        r.name = "normal-concurrent";
        r.tolerance = tol.normal_concurrent;
        // least-squares common point of all l-lines
        Mat3 Asum = Mat3::Zero();
        Vec3 bsum = Vec3::Zero();
        std::vector<std::pair<Vec3, Vec3>> lines;  // (point, unit direction)
        const double dia = f.diameter();
        for (int m = w.m_min; m < w.m_max; ++m)
            for (int n = w.n_min; n < w.n_max; ++n) {
                const Vec3 P = f.at(n + 1, m + 1) + f.at(n, m);
                const Vec3 Q = f.at(n + 1, m) + f.at(n, m + 1);
                Vec3 d = P - Q;
                const double len = d.norm();
                if (len < 1e-14 * std::max(1.0, dia)) {
                    ++degenerate;
                    continue;
                }
                d /= len;
                const Mat3 proj = Mat3::Identity() - d * d.transpose();
                Asum += proj;
                bsum += proj * P;
                lines.emplace_back(P, d);
            }
        if (lines.empty()) throw RangeError("check_normal_condition: all lines degenerate");
        const Vec3 center = Asum.ldlt().solve(bsum);
        int idx = 0;
        for (int m = w.m_min; m < w.m_max; ++m)
            for (int n = w.n_min; n < w.n_max; ++n) {
                const Vec3 P = f.at(n + 1, m + 1) + f.at(n, m);
                const Vec3 Q = f.at(n + 1, m) + f.at(n, m + 1);
                if ((P - Q).norm() < 1e-14 * std::max(1.0, dia)) continue;
                const Vec3 d = (P - Q).normalized();
                const double res = ((Mat3::Identity() - d * d.transpose()) * (center - P)).norm() /
                                   std::max(dia, 1e-300);
                if (res > r.residual) {
                    r.residual = res;
                    r.worst_n = n;
                    r.worst_m = m;
                }
                ++idx;
            }
        (void)idx;
        r.note = "center (" + fmt17(center.x()) + ", " + fmt17(center.y()) + ", " +
                 fmt17(center.z()) + ")";
    }
    if (degenerate > 0)
        r.note += (r.note.empty() ? "" : "; ") + std::to_string(degenerate) + " degenerate lines";
    r.pass = r.residual <= r.tolerance;
    return r;
}

ExtractedData extract_data(const LatticeSurface& f) {
    const LatticeWindow& w = f.window;
    if (w.n_count() < 3 || w.m_count() < 3)
        throw RangeError("extract_data: window too small (needs n-1..n+1)");
    const LatticeWindow inner = w.inset(1);
    ExtractedData e;
    e.omega = Field2<double>(inner, 0.0);
    e.g = Field2<double>(inner, 1.0);
    e.A = Field2<double>(inner, 0.0);
    e.B = Field2<double>(inner, 0.0);
    e.valid = Field2<std::uint8_t>(inner, 1);
    const double eps = f.eps, delta = f.delta, H = static_cast<double>(f.H);

    double omax = 0.0;
    for (int m = inner.m_min; m <= inner.m_max; ++m)
        for (int n = inner.n_min; n <= inner.n_max; ++n) {
            const Vec3 xi = xi_at(f, n, m);
            const Vec3 md = second_mixed_difference(f, n, m);
            const double xin2 = xi.squaredNorm();
            const double omega = xin2 > 0.0 ? md.dot(xi) / xin2 : 0.0;
            e.omega.at(n, m) = omega;
            e.g.at(n, m) = 2.0 / (2.0 - eps * delta * H * omega);
            omax = std::max(omax, std::abs(omega));
        }

    double volres = 0.0, gaussres = 0.0;
    for (int m = inner.m_min; m <= inner.m_max; ++m)
        for (int n = inner.n_min; n <= inner.n_max; ++n) {
            const double omega = e.omega.at(n, m);
            if (std::abs(omega) < 1e-12 * std::max(1.0, omax)) {
                e.valid.at(n, m) = 0;
                ++e.skipped;
                continue;
            }
            const Vec3 du = (f.at(n + 1, m) - f.at(n, m)) / eps;
            const Vec3 dv = (f.at(n, m + 1) - f.at(n, m)) / delta;
            const Vec3 xi = xi_at(f, n, m);
            Mat3 frame;
            frame.col(0) = du;
            frame.col(1) = dv;
            frame.col(2) = xi;
            const double det = frame.determinant();
            const double og = omega * e.g.at(n, m);
            volres = std::max(volres, std::abs(det - og) / std::max(1.0, std::abs(og)));
            if (std::abs(det) < 1e-12 * std::max(1.0, omax)) {
                e.valid.at(n, m) = 0;
                ++e.skipped;
                continue;
            }
            const Eigen::PartialPivLU<Mat3> lu(frame);

            // second differences expanded in the frame basis
            const Vec3 ddu = (f.at(n + 1, m) - 2.0 * f.at(n, m) + f.at(n - 1, m)) / (eps * eps);
            const Vec3 cu = lu.solve(ddu);
            e.A.at(n, m) = omega * cu(1);
            if (inner.contains(n - 1, m)) {
                const double om_prev = e.omega.at(n - 1, m);
                const double pu = (omega - om_prev) / (eps * omega) + 0.5 * delta * H * om_prev;
                gaussres = std::max(gaussres, std::abs(cu(0) - pu));
            }
            gaussres = std::max(gaussres, std::abs(cu(2)));

            const Vec3 ddv = (f.at(n, m + 1) - 2.0 * f.at(n, m) + f.at(n, m - 1)) / (delta * delta);
            const Vec3 cv = lu.solve(ddv);
            e.B.at(n, m) = omega * cv(0);
            if (inner.contains(n, m - 1)) {
                const double om_prev = e.omega.at(n, m - 1);
                const double pv = (omega - om_prev) / (delta * omega) + 0.5 * eps * H * om_prev;
                gaussres = std::max(gaussres, std::abs(cv(1) - pv));
            }
            gaussres = std::max(gaussres, std::abs(cv(2)));
        }
    e.volume_residual = volres;
    e.gauss_residual = gaussres;
    return e;
}

std::pair<SurfaceData, double> collapse_extracted(const ExtractedData& e,
                                                  const LatticeSurface& f) {
    if (f.H != 0)
        throw std::invalid_argument("collapse_extracted: one-index data requires H = 0");
    const LatticeWindow& w = e.omega.window();
    SurfaceData d;
    d.omega = e.omega;
    d.g = e.g;
    d.A = Field1<double>(w.n_min, w.n_max, 0.0);
    d.B = Field1<double>(w.m_min, w.m_max, 0.0);
    double variation = 0.0;
    for (int n = w.n_min; n <= w.n_max; ++n) {
        double val = 0.0;
        bool found = false;
        for (int m = w.m_min; m <= w.m_max; ++m)
            if (e.valid.at(n, m)) {
                if (!found) {
                    val = e.A.at(n, m);
                    found = true;
                } else {
                    variation = std::max(variation, std::abs(e.A.at(n, m) - val));
                }
            }
        d.A.at(n) = val;
    }
    for (int m = w.m_min; m <= w.m_max; ++m) {
        double val = 0.0;
        bool found = false;
        for (int n = w.n_min; n <= w.n_max; ++n)
            if (e.valid.at(n, m)) {
                if (!found) {
                    val = e.B.at(n, m);
                    found = true;
                } else {
                    variation = std::max(variation, std::abs(e.B.at(n, m) - val));
                }
            }
        d.B.at(m) = val;
    }
    flag_singular_sites(d);
    return {std::move(d), variation};
}

namespace {

double data_scale(double omax, double amax, double bmax, double eps, double delta) {
    return std::max(1e-300, omax * omax + eps * delta * amax * bmax);
}

}  // namespace

CheckResult check_lattice_equation(const ExtractedData& d, double eps, double delta, int H,
                                   const Tolerances& tol) {
    CheckResult r;
    r.name = "lattice-equation";
    const LatticeWindow& w = d.omega.window();
    double omax = 0.0, amax = 0.0, bmax = 0.0;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            omax = std::max(omax, std::abs(d.omega.at(n, m)));
            amax = std::max(amax, std::abs(d.A.at(n, m)));
            bmax = std::max(bmax, std::abs(d.B.at(n, m)));
        }
    const double scale = data_scale(omax, amax, bmax, eps, delta);
    r.tolerance = tol.lattice_equation;
    int used = 0;
    for (int m = w.m_min; m < w.m_max; ++m)
        for (int n = w.n_min; n < w.n_max; ++n) {
            if (!d.valid.at(n, m) || !d.valid.at(n + 1, m) || !d.valid.at(n, m + 1) ||
                !d.valid.at(n + 1, m + 1))
                continue;
            ++used;
            const double r1 = d.omega.at(n + 1, m + 1) * d.omega.at(n, m) -
                              d.omega.at(n + 1, m) * d.omega.at(n, m + 1) /
                                  (d.g.at(n + 1, m + 1) * d.g.at(n, m)) +
                              eps * delta * d.A.at(n + 1, m) * d.B.at(n + 1, m + 1);
            const double r2 =
                d.g.at(n + 1, m + 1) * d.A.at(n + 1, m + 1) - d.g.at(n, m) * d.A.at(n + 1, m);
            const double r3 =
                d.g.at(n + 1, m + 1) * d.B.at(n + 1, m + 1) - d.g.at(n, m) * d.B.at(n, m + 1);
            const double res =
                std::max(std::abs(r1), std::max(std::abs(r2), std::abs(r3)) * omax) / scale;
            if (res > r.residual) {
                r.residual = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    (void)H;
    r.note = std::to_string(used) + " cells";
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_lattice_equation(const SurfaceData& d, double eps, double delta,
                                   const Tolerances& tol) {
    CheckResult r;
    r.name = "lattice-equation";
    const LatticeWindow& w = d.omega.window();
    double omax = 0.0, amax = 0.0, bmax = 0.0;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) omax = std::max(omax, std::abs(d.omega.at(n, m)));
    for (int n = d.A.i_min(); n <= d.A.i_max(); ++n) amax = std::max(amax, std::abs(d.A.at(n)));
    for (int m = d.B.i_min(); m <= d.B.i_max(); ++m) bmax = std::max(bmax, std::abs(d.B.at(m)));
    r.tolerance = tol.lattice_equation;
    const double scale = data_scale(omax, amax, bmax, eps, delta);
    for (int m = w.m_min; m < w.m_max; ++m)
        for (int n = w.n_min; n < w.n_max; ++n) {
            const double res = std::abs(d.omega.at(n + 1, m + 1) * d.omega.at(n, m) -
                                        d.omega.at(n + 1, m) * d.omega.at(n, m + 1) +
                                        eps * delta * d.A.at(n + 1) * d.B.at(m + 1)) /
                               scale;
            if (res > r.residual) {
                r.residual = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    r.pass = r.residual <= r.tolerance;
    return r;
}

namespace {

Mat3 lax_U(const SurfaceData& d, double eps, double delta, int Hi, double lambda, int n, int m) {
    const double H = static_cast<double>(Hi);
    const double om = d.omega.at(n, m), om1 = d.omega.at(n + 1, m);
    const double g1 = d.g.at(n + 1, m);
    const double A1 = d.A.at(n + 1);
    const double el = eps * lambda;
    Mat3 U;
    U << om1 * g1 / om - 0.5 * H * A1 * g1 * el * el * el,
        -0.5 * H * (om / (om1 * g1)) * el * el, -H * el,
        A1 * g1 * el, om / (om1 * g1), 0.0,
        A1 * g1 * el * el, (om / (om1 * g1)) * el, 1.0;
    (void)delta;
    return U;
}

Mat3 lax_V(const SurfaceData& d, double eps, double delta, int Hi, double lambda, int n, int m) {
    const double H = static_cast<double>(Hi);
    const double om = d.omega.at(n, m), om1 = d.omega.at(n, m + 1);
    const double g = d.g.at(n, m);
    const double B1 = d.B.at(m + 1);
    const double dl = delta / lambda;
    Mat3 V;
    V << 1.0 / g, (B1 / (om1 * om * g)) * dl, 0.0,
        -0.5 * H * om * om * g * dl * dl, g - 0.5 * H * (B1 * om * g / om1) * dl * dl * dl,
        -H * om * g * dl,
        om * dl, (B1 / om1) * dl * dl, 1.0;
    (void)eps;
    return V;
}

}  // namespace

CheckResult check_lax(const SurfaceData& d, const LatticeSurface& f, double lambda,
                      const Tolerances& tol) {
    if (lambda == 0.0) throw std::domain_error("check_lax: lambda = 0");
    CheckResult r;
    r.name = "lax-compatibility";
    r.tolerance = tol.lax;
    const LatticeWindow& w = d.omega.window();
    double scale = 0.0;
    int skipped = 0;
    double worst = 0.0;

    // compatibility U^m_n V^m_{n+1} = V^m_n U^{m+1}_n
    for (int m = w.m_min; m + 1 < w.m_max; ++m)
        for (int n = w.n_min; n + 1 < w.n_max; ++n) {
            const bool ok = !d.is_singular(n, m) && !d.is_singular(n + 1, m) &&
                            !d.is_singular(n, m + 1) && !d.is_singular(n + 1, m + 1);
            if (!ok) {
                ++skipped;
                continue;
            }
            const Mat3 lhs = lax_U(d, f.eps, f.delta, f.H, lambda, n, m) *
                             lax_V(d, f.eps, f.delta, f.H, lambda, n + 1, m);
            const Mat3 rhs = lax_V(d, f.eps, f.delta, f.H, lambda, n, m) *
                             lax_U(d, f.eps, f.delta, f.H, lambda, n, m + 1);
            scale = std::max(scale, lhs.cwiseAbs().maxCoeff());
            const double res = (lhs - rhs).cwiseAbs().maxCoeff();
            if (res > worst) {
                worst = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    r.residual = worst / std::max(1.0, scale);

    // Frame recursion against the frame rebuilt from f through the gauged
    // moving frame.  The diagonal gauge ties to the Lax matrices at
    // lambda = 1; the lambda dependence itself is covered by the
    // compatibility residual above.
    auto gauged = [&](int n, int m) {
        Mat3 ft;
        ft.col(0) = (f.at(n + 1, m) - f.at(n, m)) / f.eps;
        ft.col(1) = (f.at(n, m + 1) - f.at(n, m)) / f.delta;
        ft.col(2) = xi_at(f, n, m);
        Mat3 gauge = Mat3::Zero();
        gauge(0, 0) = 1.0;
        gauge(1, 1) = 1.0 / (d.omega.at(n, m) * d.g.at(n, m));
        gauge(0, 2) = f.eps * f.H / 2.0;
        gauge(1, 2) = f.delta * f.H / 2.0;
        gauge(2, 2) = 1.0;
        return Mat3(ft * gauge);
    };
    double frame_res = 0.0;
    for (int m = w.m_min; m + 1 < w.m_max; ++m)
        for (int n = w.n_min; n + 1 < w.n_max; ++n) {
            const bool ok = !d.is_singular(n, m) && !d.is_singular(n + 1, m) &&
                            !d.is_singular(n, m + 1);
            if (!ok) {
                ++skipped;
                continue;
            }
            const Mat3 F = gauged(n, m);
            frame_res = std::max(
                frame_res, (gauged(n + 1, m) - F * lax_U(d, f.eps, f.delta, f.H, 1.0, n, m))
                               .cwiseAbs()
                               .maxCoeff());
            frame_res = std::max(
                frame_res, (gauged(n, m + 1) - F * lax_V(d, f.eps, f.delta, f.H, 1.0, n, m))
                               .cwiseAbs()
                               .maxCoeff());
        }
    r.residual = std::max(r.residual, frame_res / std::max(1.0, scale));
    if (skipped > 0) r.note = std::to_string(skipped) + " singular sites skipped";
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_volume_condition(const LatticeSurface& f, const SurfaceData& d,
                                   const Tolerances& tol) {
    CheckResult r;
    r.name = "volume-condition";
    r.tolerance = tol.volume;
    const LatticeWindow& w = d.omega.window();
    for (int m = w.m_min; m < w.m_max; ++m)
        for (int n = w.n_min; n < w.n_max; ++n) {
            Mat3 ft;
            ft.col(0) = (f.at(n + 1, m) - f.at(n, m)) / f.eps;
            ft.col(1) = (f.at(n, m + 1) - f.at(n, m)) / f.delta;
            ft.col(2) = xi_at(f, n, m);
            const double og = d.omega.at(n, m) * d.g.at(n, m);
            const double res = std::abs(ft.determinant() - og) / std::max(1.0, std::abs(og));
            if (res > r.residual) {
                r.residual = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    r.pass = r.residual <= r.tolerance;
    return r;
}

CheckResult check_extract_match(const LatticeSurface& f, const SurfaceData& d,
                                const Tolerances& tol) {
    CheckResult r;
    r.name = "extract-match";
    r.tolerance = tol.extract_match;
    const ExtractedData e = extract_data(f);
    const LatticeWindow& w = e.omega.window();
    double omax = 0.0;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n)
            omax = std::max(omax, std::abs(d.omega.at(n, m)));
    double amax = 0.0, bmax = 0.0;
    for (int n = w.n_min; n <= w.n_max; ++n) amax = std::max(amax, std::abs(d.A.at(n)));
    for (int m = w.m_min; m <= w.m_max; ++m) bmax = std::max(bmax, std::abs(d.B.at(m)));
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            if (!e.valid.at(n, m) || d.is_singular(n, m)) continue;
            double res = std::abs(e.omega.at(n, m) - d.omega.at(n, m)) / std::max(1.0, omax);
            res = std::max(res, std::abs(e.A.at(n, m) - d.A.at(n)) / std::max(1.0, amax));
            res = std::max(res, std::abs(e.B.at(n, m) - d.B.at(m)) / std::max(1.0, bmax));
            if (res > r.residual) {
                r.residual = res;
                r.worst_n = n;
                r.worst_m = m;
            }
        }
    r.pass = r.residual <= r.tolerance;
    return r;
}

VerificationReport full_suite(const LatticeSurface& f, const SurfaceData* data, double lambda,
                              const Tolerances& tol) {
    VerificationReport rep;
    const bool has_interior = f.window.n_count() >= 3 && f.window.m_count() >= 3;
    const bool has_cells = f.window.n_count() >= 2 && f.window.m_count() >= 2;
    if (has_interior) rep.add(check_coplanarity(f, tol));
    if (has_cells) rep.add(check_normal_condition(f, tol));
    if (data != nullptr) {
        if (has_interior) rep.add(check_extract_match(f, *data, tol));
        if (has_cells) rep.add(check_volume_condition(f, *data, tol));
        rep.add(check_lattice_equation(*data, f.eps, f.delta, tol));
        if (f.window.n_count() >= 3 && f.window.m_count() >= 3)
            rep.add(check_lax(*data, f, lambda, tol));
    } else if (has_interior) {
        const ExtractedData e = extract_data(f);
        rep.add(check_lattice_equation(e, f.eps, f.delta, f.H, tol));
        CheckResult vol;
        vol.name = "volume-condition";
        vol.tolerance = tol.volume;
        vol.residual = e.volume_residual;
        vol.pass = vol.residual <= vol.tolerance;
        rep.add(vol);
    }
    return rep;
}

std::vector<double> ConvergenceTable::ratios_f() const {
    std::vector<double> r;
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        r.push_back(rows[i + 1].err_f > 0.0 ? rows[i].err_f / rows[i + 1].err_f : 0.0);
    return r;
}

std::vector<double> ConvergenceTable::ratios_z() const {
    std::vector<double> r;
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        r.push_back(rows[i + 1].err_z > 0.0 ? rows[i].err_z / rows[i + 1].err_z : 0.0);
    return r;
}

std::string ConvergenceTable::table() const {
    std::ostringstream os;
    os << "h            sup|f_d - f_s|   sup|z_d - z_s|\n";
    for (const auto& row : rows) {
        char line[96];
        std::snprintf(line, sizeof line, "%-12.6g %-16.8g %-16.8g\n", row.h, row.err_f, row.err_z);
        os << line;
    }
    const auto rf = ratios_f();
    os << "ratios:";
    for (double x : rf) os << " " << x;
    os << "\n";
    return os.str();
}

ConvergenceTable convergence_study(const SmoothCurveSampler& g1, const SmoothCurveSampler& g2,
                                   double extent, const std::vector<double>& hs) {
    ConvergenceTable out;
    for (double h : hs) {
        const int N = static_cast<int>(std::llround(extent / h));
        if (N < 1) throw std::invalid_argument("convergence_study: extent smaller than h");
        const DiscreteCurve d1 = sample_curve(g1.value, h, -N - 1, N + 1);
        const DiscreteCurve d2 = sample_curve(g2.value, h, -N - 1, N + 1);
        const LatticeWindow w(-N, N, -N, N);
        const auto [fd, dd] = improper::build_discrete_from_curves(d1, d2, w);
        const GridSpec grid(h, -N, N);
        const auto [fs, ds] = improper::build_smooth_from_curves(g1, g2, grid, grid);
        ConvergenceRow row;
        row.h = h;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) {
                const Vec3 diff = fd.at(n, m) - fs.at(n, m);
                row.err_f = std::max(row.err_f, diff.norm());
                row.err_z = std::max(row.err_z, std::abs(diff.z()));
            }
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace affsphere::verify
