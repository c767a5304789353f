#include "affsphere/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace affsphere::io {

namespace {

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

}  // namespace

void export_obj(const LatticeSurface& f, const std::string& path) {
    std::ofstream os = open_out(path);
    const LatticeWindow& w = f.window;
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const Vec3& p = f.at(n, m);
            os << "v " << g17(p.x()) << " " << g17(p.y()) << " " << g17(p.z()) << "\n";
        }
    const int nw = w.n_count();
    auto vid = [&](int n, int m) { return (m - w.m_min) * nw + (n - w.n_min) + 1; };
    for (int m = w.m_min; m < w.m_max; ++m)
        for (int n = w.n_min; n < w.n_max; ++n)
            os << "f " << vid(n, m) << " " << vid(n + 1, m) << " " << vid(n + 1, m + 1) << " "
               << vid(n, m + 1) << "\n";
}

void export_csv(const LatticeSurface& f, const SurfaceData* data, const std::string& path) {
    std::ofstream os = open_out(path);
    const LatticeWindow& w = f.window;
    os << "# eps " << g17(f.eps) << "\n";
    os << "# delta " << g17(f.delta) << "\n";
    os << "# H " << f.H << "\n";
    os << "# xi0 " << g17(f.xi0.x()) << " " << g17(f.xi0.y()) << " " << g17(f.xi0.z()) << "\n";
    os << "n,m,x,y,z,omega,g,singular\n";
    for (int m = w.m_min; m <= w.m_max; ++m)
        for (int n = w.n_min; n <= w.n_max; ++n) {
            const Vec3& p = f.at(n, m);
            os << n << "," << m << "," << g17(p.x()) << "," << g17(p.y()) << "," << g17(p.z());
            if (data != nullptr)
                os << "," << g17(data->omega.at(n, m)) << "," << g17(data->g.at(n, m)) << ","
                   << int(data->singular.at(n, m));
            else
                os << ",0,0,0";
            os << "\n";
        }
}

void export_ab_csv(const SurfaceData& data, const std::string& path_a,
                   const std::string& path_b) {
    {
        std::ofstream os = open_out(path_a);
        os << "n,A\n";
        for (int n = data.A.i_min(); n <= data.A.i_max(); ++n)
            os << n << "," << g17(data.A.at(n)) << "\n";
    }
    {
        std::ofstream os = open_out(path_b);
        os << "m,B\n";
        for (int m = data.B.i_min(); m <= data.B.i_max(); ++m)
            os << m << "," << g17(data.B.at(m)) << "\n";
    }
}

ImportedSurface import_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    double eps = 1.0, delta = 1.0;
    int H = 0;
    Vec3 xi0(0, 0, 1);
    struct Row {
        int n, m;
        Vec3 p;
        double omega, g;
        int singular;
    };
    std::vector<Row> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string key;
            ss >> key;
            if (key == "eps") ss >> eps;
            else if (key == "delta") ss >> delta;
            else if (key == "H") ss >> H;
            else if (key == "xi0") ss >> xi0.x() >> xi0.y() >> xi0.z();
            continue;
        }
        if (!header_seen) {  // column header line
            header_seen = true;
            continue;
        }
        Row r{};
        for (auto& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ss(line);
        if (!(ss >> r.n >> r.m >> r.p.x() >> r.p.y() >> r.p.z()))
            throw std::runtime_error("malformed CSV row: " + line);
        if (!(ss >> r.omega >> r.g >> r.singular)) {
            r.omega = r.g = 0.0;
            r.singular = 0;
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw std::runtime_error("empty surface file: " + path);
    int n0 = rows[0].n, n1 = rows[0].n, m0 = rows[0].m, m1 = rows[0].m;
    for (const auto& r : rows) {
        n0 = std::min(n0, r.n);
        n1 = std::max(n1, r.n);
        m0 = std::min(m0, r.m);
        m1 = std::max(m1, r.m);
    }
    const LatticeWindow w(n0, n1, m0, m1);
    ImportedSurface out;
    out.surface.window = w;
    out.surface.eps = eps;
    out.surface.delta = delta;
    out.surface.H = H;
    out.surface.xi0 = xi0;
    out.surface.points = Field2<Vec3>(w);
    out.omega = Field2<double>(w, 0.0);
    out.g = Field2<double>(w, 1.0);
    out.singular = Field2<std::uint8_t>(w, 0);
    Field2<std::uint8_t> seen(w, 0);
    bool any_data = false;
    for (const auto& r : rows) {
        out.surface.at(r.n, r.m) = r.p;
        out.omega.at(r.n, r.m) = r.omega;
        out.g.at(r.n, r.m) = r.g;
        out.singular.at(r.n, r.m) = static_cast<std::uint8_t>(r.singular != 0);
        seen.at(r.n, r.m) = 1;
        if (r.omega != 0.0 || r.g != 0.0) any_data = true;
    }
    for (int m = m0; m <= m1; ++m)
        for (int n = n0; n <= n1; ++n)
            if (!seen.at(n, m))
                throw std::runtime_error("surface file misses site (" + std::to_string(n) + "," +
                                         std::to_string(m) + ")");
    out.has_data = any_data;
    return out;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream os = open_out(path);
    os << text;
}

}  // namespace affsphere::io
