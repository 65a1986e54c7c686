#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hypersurf/amsler.hpp"
#include "hypersurf/geodesic.hpp"
#include "hypersurf/mesh.hpp"

namespace hypersurf {

/// A complex together with the convergence history that produced it.
struct MeshBundle {
    SurfaceComplex complex;
    std::vector<StageStats> stages;
};

/// OBJ text: structural metadata in leading comments, then one v/vn per glued vertex and one
/// quad face per active quad, grouped by sector.
std::string write_obj(const MeshBundle& bundle);

/// Per-node CSV: sector_id,i,j,vertex_index,x,y,z,nx,ny,nz,D,K,rho.
std::string write_csv(const SurfaceComplex& c);

/// Inverse of write_obj + write_csv. Throws ConfigError on malformed or inconsistent input.
MeshBundle read_mesh(const std::string& obj_text, const std::string& csv_text);

void export_mesh(const MeshBundle& bundle, const std::filesystem::path& obj_path,
                 const std::filesystem::path& csv_path);
MeshBundle import_mesh(const std::filesystem::path& obj_path, const std::filesystem::path& csv_path);

/// Any OBJ with triangle or quad faces; quads are split by the same diagonal rule as
/// triangulate_complex.
TriMesh load_obj_trimesh(const std::filesystem::path& path);
TriMesh parse_obj_trimesh(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// printf("%.17g").
std::string format_double(double x);

}  // namespace hypersurf
