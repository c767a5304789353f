#pragma once

#include "affsphere/lattice.hpp"
#include "affsphere/verify.hpp"

#include <optional>
#include <string>

// File formats: OBJ quad meshes and CSV site tables.  Reals are printed with
// 17 significant digits so that a re-import reproduces every coordinate
// bitwise.  Surface CSVs carry eps/delta/H/xi0 as leading '#' comment lines.

namespace affsphere::io {

/// One `v x y z` line per site in row-major order (m outer, n inner), one
/// ccw quad face per cell, 1-based indices.
void export_obj(const LatticeSurface& f, const std::string& path);

/// Header `n,m,x,y,z,omega,g,singular`; omega/g/singular columns are zero
/// when no data is supplied.
void export_csv(const LatticeSurface& f, const SurfaceData* data, const std::string& path);

/// One-index companions: `n,A` and `m,B`.
void export_ab_csv(const SurfaceData& data, const std::string& path_a,
                   const std::string& path_b);

struct ImportedSurface {
    LatticeSurface surface;
    bool has_data = false;
    Field2<double> omega;
    Field2<double> g;
    Field2<std::uint8_t> singular;
};

ImportedSurface import_csv(const std::string& path);

void write_text(const std::string& text, const std::string& path);

}  // namespace affsphere::io
