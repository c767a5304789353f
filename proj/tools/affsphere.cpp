#include <CLI11.hpp>

#include "affsphere/gallery.hpp"
#include "affsphere/improper.hpp"
#include "affsphere/io.hpp"
#include "affsphere/proper.hpp"
#include "affsphere/verify.hpp"

#include <iostream>

using namespace affsphere;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct WindowOpt {
    std::string text = "-8:8,-8:8";
    LatticeWindow parse() const {
        int n0, n1, m0, m1;
        if (std::sscanf(text.c_str(), "%d:%d,%d:%d", &n0, &n1, &m0, &m1) != 4)
            throw CLI::ValidationError("--window", "expected n0:n1,m0:m1");
        return LatticeWindow(n0, n1, m0, m1);
    }
};

struct Outputs {
    std::string prefix = "out";
    bool wrote_any = false;
};

void write_surface(Outputs& out, const LatticeSurface& f, const SurfaceData* data) {
    io::export_obj(f, out.prefix + ".obj");
    io::export_csv(f, data, out.prefix + ".csv");
    if (data != nullptr) io::export_ab_csv(*data, out.prefix + ".A.csv", out.prefix + ".B.csv");
    out.wrote_any = true;
}

int write_report(Outputs& out, const verify::VerificationReport& rep) {
    std::cout << rep.table();
    io::write_text(rep.table(), out.prefix + ".report.txt");
    io::write_text(rep.records(), out.prefix + ".report.dat");
    return rep.overall() ? 0 : 1;
}

DiscreteCurve load_curve_csv(const std::string& path, double step) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read curve file " + path);
    std::vector<std::pair<int, Vec2>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0])))
            continue;
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ss(line);
        int i;
        double x, y;
        if (ss >> i >> x >> y) rows.emplace_back(i, Vec2(x, y));
    }
    if (rows.empty()) throw std::runtime_error("no rows in curve file " + path);
    int lo = rows[0].first, hi = rows[0].first;
    for (auto& [i, v] : rows) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    Field1<Vec2> pts(lo, hi);
    for (auto& [i, v] : rows) pts.at(i) = v;
    return DiscreteCurve(step, std::move(pts));
}

DiscreteCurve named_curve(const std::string& name, double step, int lo, int hi, double q) {
    if (name == "trivial-x")
        return sample_curve([](double t) { return Vec2(t, 0.0); }, step, lo, hi);
    if (name == "trivial-y")
        return sample_curve([](double t) { return Vec2(0.0, t); }, step, lo, hi);
    if (name == "circle") {
        const double th = 2.0 / step * std::atan(0.5 * step * q);
        DiscreteCurve c = sample_curve(
            [&](double t) { return Vec2(std::cos(t), std::sin(t)); }, th * step, lo, hi);
        c.step = step;
        return c;
    }
    throw CLI::ValidationError("--curves", "unknown curve family: " + name);
}

Field1<double> parse_values(const std::string& text, int lo, int hi) {
    // constant ("1.0") or comma list covering [lo, hi]
    Field1<double> out(lo, hi);
    if (text.find(',') == std::string::npos) {
        const double v = std::stod(text);
        for (int i = lo; i <= hi; ++i) out.at(i) = v;
        return out;
    }
    std::vector<double> vals;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (static_cast<int>(vals.size()) != hi - lo + 1)
        throw CLI::ValidationError("potential list needs " + std::to_string(hi - lo + 1) +
                                   " values");
    for (int i = lo; i <= hi; ++i) out.at(i) = vals[static_cast<size_t>(i - lo)];
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete indefinite affine spheres: construction and verification"};
    app.set_config("--config");
    app.require_subcommand(1);

    WindowOpt window;
    Outputs out;
    double eps = 1.0, delta = 1.0, lambda = 1.0;
    int H = 0;
    verify::Tolerances tol;
    app.fallthrough();
    app.add_option("--tol-coplanarity", tol.coplanarity, "coplanarity tolerance");
    app.add_option("--tol-normal", tol.normal_parallel, "l-line parallelism tolerance");
    app.add_option("--tol-concurrent", tol.normal_concurrent, "l-line concurrency tolerance");
    app.add_option("--tol-lattice", tol.lattice_equation, "lattice equation tolerance");
    app.add_option("--tol-lax", tol.lax, "Lax compatibility tolerance");

    // ---- gallery ----
    auto* gal = app.add_subcommand("gallery", "emit a worked example with its report");
    std::string gal_name = "discrete-circle";
    double gal_q = 2.0, gal_q2 = -1.0;
    int gal_N = 2, gal_N2 = -1;
    gal->add_option("--name", gal_name,
                    "discrete-circle|discrete-square|discrete-genus1|discrete-graph|"
                    "smooth-circle|smooth-square|smooth-genus1|smooth-graph");
    gal->add_option("--q", gal_q, "circle parameter q1");
    gal->add_option("--q2", gal_q2, "circle parameter q2 (defaults to q1)");
    gal->add_option("--N", gal_N, "square/genus1 parameter N1");
    gal->add_option("--N2", gal_N2, "square parameter N2 (defaults to N1)");
    gal->add_option("--eps", eps, "lattice interval eps");
    gal->add_option("--delta", delta, "lattice interval delta");
    gal->add_option("--window", window.text, "lattice window n0:n1,m0:m1");
    gal->add_option("--out", out.prefix, "output path prefix");

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "build a surface and verify it");
    std::string mode = "curves";
    std::string curves_spec = "trivial-axes";
    std::string curve1_file, curve2_file;
    std::string alpha_s = "1", beta_s = "0", rho_s = "1", sigma_s = "0";
    int K = 12;
    gen->add_option("--mode", mode, "curves|potentials|proper");
    gen->add_option("--curves", curves_spec, "trivial-axes|circle (named) or csv");
    gen->add_option("--curve1", curve1_file, "CSV file i,x,y for gamma1");
    gen->add_option("--curve2", curve2_file, "CSV file i,x,y for gamma2");
    gen->add_option("--alpha", alpha_s, "constant or comma list");
    gen->add_option("--beta", beta_s, "constant or comma list");
    gen->add_option("--rho", rho_s, "constant or comma list");
    gen->add_option("--sigma", sigma_s, "constant or comma list");
    gen->add_option("--lambda", lambda, "spectral parameter");
    gen->add_option("--eps", eps, "lattice interval eps");
    gen->add_option("--delta", delta, "lattice interval delta");
    gen->add_option("--K", K, "Birkhoff truncation order (proper mode)");
    gen->add_option("--window", window.text, "lattice window n0:n1,m0:m1");
    gen->add_option("--out", out.prefix, "output path prefix");

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "run the invariant suite on a surface file");
    std::string surface_file;
    ver->add_option("--surface", surface_file, "surface CSV")->required();
    ver->add_option("--lambda", lambda, "spectral parameter for the Lax check");
    ver->add_option("--out", out.prefix, "output path prefix");

    // ---- export ----
    auto* exp = app.add_subcommand("export", "convert a surface CSV to OBJ");
    std::string export_in;
    exp->add_option("--surface", export_in, "surface CSV")->required();
    exp->add_option("--out", out.prefix, "output path prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(gal)) {
            if (gal_q2 <= 0.0) gal_q2 = gal_q;
            if (gal_N2 < 1) gal_N2 = gal_N;
            const LatticeWindow w = window.parse();
            gallery::ExampleBundle bundle;
            if (gal_name == "discrete-circle")
                bundle = gallery::discrete_circle(gal_q, gal_q2, eps, delta, w);
            else if (gal_name == "discrete-square")
                bundle = gallery::discrete_square(gal_N, gal_N2, eps, delta, w);
            else if (gal_name == "discrete-genus1")
                bundle = gallery::discrete_genus1(gal_N, eps, delta, w);
            else if (gal_name == "discrete-graph") {
                Field1<double> P(w.n_min - 1, w.n_max + 2), R(w.m_min - 1, w.m_max + 2);
                for (int n = P.i_min(); n <= P.i_max(); ++n)
                    P.at(n) = std::pow(eps * n, 3) / 6.0;
                for (int m = R.i_min(); m <= R.i_max(); ++m) R.at(m) = 0.0;
                bundle = gallery::discrete_graph(P, R, eps, delta, w);
            } else if (gal_name == "smooth-circle" || gal_name == "smooth-square" ||
                       gal_name == "smooth-genus1" || gal_name == "smooth-graph") {
                const GridSpec gu(kPi / 40.0, w.n_min, w.n_max);
                const GridSpec gv(kPi / 40.0, w.m_min, w.m_max);
                if (gal_name == "smooth-circle")
                    bundle = gallery::smooth_circle(gu, gv);
                else if (gal_name == "smooth-square")
                    bundle = gallery::smooth_square(gu, gv);
                else if (gal_name == "smooth-genus1")
                    bundle = gallery::smooth_genus1(gu, gv);
                else {
                    gallery::GraphFunction P{[](double u) { return u * u * u / 6.0; },
                                             [](double u) { return u * u / 2.0; },
                                             [](double u) { return u; },
                                             [](double) { return 1.0; }};
                    gallery::GraphFunction R{[](double) { return 0.0; }, [](double) { return 0.0; },
                                             [](double) { return 0.0; },
                                             [](double) { return 0.0; }};
                    bundle = gallery::smooth_graph(P, R, gu, gv);
                }
            } else {
                std::cerr << "unknown gallery name: " << gal_name << "\n";
                return 2;
            }
            write_surface(out, bundle.surface, &bundle.data);
            return write_report(out, gallery::cross_check(bundle));
        }

        if (app.got_subcommand(gen)) {
            const LatticeWindow w = window.parse();
            if (mode == "curves") {
                DiscreteCurve g1, g2;
                if (!curve1_file.empty() || !curve2_file.empty()) {
                    if (curve1_file.empty() || curve2_file.empty())
                        throw CLI::ValidationError("--curve1/--curve2 must both be given");
                    g1 = load_curve_csv(curve1_file, eps);
                    g2 = load_curve_csv(curve2_file, delta);
                } else if (curves_spec == "trivial-axes") {
                    g1 = named_curve("trivial-x", eps, w.n_min - 1, w.n_max + 1, 0);
                    g2 = named_curve("trivial-y", delta, w.m_min - 1, w.m_max + 1, 0);
                } else {
                    g1 = named_curve(curves_spec, eps, w.n_min - 1, w.n_max + 1, 2.0);
                    g2 = named_curve(curves_spec, delta, w.m_min - 1, w.m_max + 1, 2.0);
                }
                auto [f, d] = improper::build_discrete_from_curves(g1, g2, w);
                write_surface(out, f, &d);
                return write_report(out, verify::full_suite(f, &d, lambda, tol));
            }
            if (mode == "potentials") {
                improper::PotentialData p;
                p.alpha = parse_values(alpha_s, w.n_min - 1, w.n_max + 1);
                p.beta = parse_values(beta_s, w.n_min - 1, w.n_max + 1);
                p.rho = parse_values(rho_s, w.m_min - 1, w.m_max + 1);
                p.sigma = parse_values(sigma_s, w.m_min - 1, w.m_max + 1);
                p.eps = eps;
                p.delta = delta;
                p.H = 0;
                auto [f, d] = improper::build_discrete_from_potentials(p, lambda, w);
                write_surface(out, f, &d);
                return write_report(out, verify::full_suite(f, &d, lambda, tol));
            }
            if (mode == "proper") {
                improper::PotentialData p;
                p.alpha = parse_values(alpha_s, w.n_min - 1, w.n_max + 1);
                p.beta = parse_values(beta_s, w.n_min - 1, w.n_max + 1);
                p.rho = parse_values(rho_s, w.m_min - 1, w.m_max + 1);
                p.sigma = parse_values(sigma_s, w.m_min - 1, w.m_max + 1);
                p.eps = eps;
                p.delta = delta;
                p.H = -1;
                const auto build = proper::build_discrete_proper(p, lambda, w, K);
                write_surface(out, build.surface, nullptr);
                verify::VerificationReport rep;
                rep.add(verify::check_coplanarity(build.surface, tol));
                rep.add(verify::check_normal_condition(build.surface, tol));
                const auto extracted = verify::extract_data(build.surface);
                rep.add(verify::check_lattice_equation(extracted, eps, delta, -1, tol));
                return write_report(out, rep);
            }
            std::cerr << "unknown mode: " << mode << "\n";
            return 2;
        }

        if (app.got_subcommand(ver)) {
            const io::ImportedSurface im = io::import_csv(surface_file);
            verify::VerificationReport rep;
            rep.add(verify::check_coplanarity(im.surface, tol));
            rep.add(verify::check_normal_condition(im.surface, tol));
            const auto extracted = verify::extract_data(im.surface);
            rep.add(verify::check_lattice_equation(extracted, im.surface.eps, im.surface.delta,
                                                   im.surface.H, tol));
            if (im.surface.H == 0 && im.has_data) {
                auto [d, variation] = verify::collapse_extracted(extracted, im.surface);
                rep.add(verify::check_lax(d, im.surface, lambda, tol));
            }
            return write_report(out, rep);
        }

        if (app.got_subcommand(exp)) {
            const io::ImportedSurface im = io::import_csv(export_in);
            io::export_obj(im.surface, out.prefix + ".obj");
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
