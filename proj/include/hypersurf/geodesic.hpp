#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hypersurf/mesh.hpp"
#include "hypersurf/vec3.hpp"

namespace hypersurf {

/// Triangulated view of a surface used by the eikonal solver.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<NodeRef>> refs;  // glued storage slots behind each vertex; may be empty
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::vector<int>> vertex_triangles;
    std::vector<std::vector<int>> vertex_neighbors;
    std::vector<std::array<double, 3>> edge_lengths;  // opposite to corner 0, 1, 2
    std::size_t obtuse_triangles = 0;
    double max_angle = 0.0;

    /// Rebuilds adjacency, edge lengths and the obtuse count from vertices/triangles.
    void finalize();
};

TriMesh make_trimesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

/// Splits each active quad along the diagonal minimising the largest triangle angle. Ties go to
/// the (u+v) diagonal joining (i,j) and (i+1,j+1). Glued nodes share one mesh vertex.
/// Throws DegenerateQuadError when both splits produce a zero-area triangle.
TriMesh triangulate_complex(const SurfaceComplex& c);

/// Same diagonal rule for plain quads (a, b, c, d) in cyclic order; a-c is the preferred diagonal.
TriMesh triangulate_quads(std::vector<Vec3> vertices, std::span<const std::array<int, 4>> quads);

struct UnfoldResult {
    double value = 0.0;
    bool fallback = false;  // placement infeasible; value is the edge-path minimum
    bool outside = false;   // the path from the source misses edge jk; value is the edge-path minimum
};

/// Distance estimate at r_i from known distances at r_j, r_k after unfolding triangle (i,j,k)
/// into the plane with r_k at the origin and r_j on the positive x axis. The source is placed
/// below the edge and r_i above it; the result is capped by the two edge paths, and is the
/// edge-path minimum alone when the straight unfolded path does not cross edge jk.
UnfoldResult unfold_candidate(double dj, double dk, double dij, double dik, double djk);

struct Source {
    int vertex = 0;
    double distance = 0.0;
};

struct FastMarchResult {
    std::vector<double> distance;
    std::vector<int> acceptance_order;
    std::vector<int> unreachable;
    std::size_t heap_pushes = 0;
    std::size_t heap_pops = 0;
    std::size_t fallback_updates = 0;
};

/// Label-setting eikonal solve. Sources are Accepted up front with their given distances.
FastMarchResult fast_march(const TriMesh& m, std::span<const Source> sources);

/// Edge-graph shortest path; an upper bound for fast_march on the same mesh.
std::vector<double> dijkstra_bound(const TriMesh& m, std::span<const Source> sources);

/// Fast-march distance from the complex origin written into every active node's geo_dist.
/// Returns the mesh that was used.
TriMesh assign_geodesic_distance(SurfaceComplex& c);

}  // namespace hypersurf
