#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hypersurf/amsler.hpp"
#include "hypersurf/mesh.hpp"

namespace hypersurf {

struct DiagnosticsReport {
    std::size_t sectors = 0;
    std::size_t vertices = 0;
    std::size_t quads = 0;

    // Maxima over active quads.
    double max_compatibility = 0.0;
    double max_tangency = 0.0;
    double max_edge_length = 0.0;
    double max_unit_norm = 0.0;
    double max_route = 0.0;
    double max_rho_closure = 0.0;

    std::vector<StageStats> stages;

    // Fast-march D against arc length along the straight rays leaving the origin.
    double boundary_arc_length_error = 0.0;
    std::size_t boundary_nodes_checked = 0;

    double max_gluing_position_gap = 0.0;
    double max_gluing_normal_gap = 0.0;

    std::size_t triangles = 0;
    std::size_t obtuse_triangles = 0;
    double max_triangle_angle = 0.0;

    /// min over quads of (pi - largest corner angle); small values flag singular edges.
    double singular_edge_margin = 0.0;
    NodeRef singular_edge_quad;

    ValidationReport validation;
};

DiagnosticsReport compute_diagnostics(const SurfaceComplex& c, std::vector<StageStats> stages);

std::string format_report(const DiagnosticsReport& r);

/// Machine-readable form of the same fields. Non-finite numbers become null.
std::string report_json(const DiagnosticsReport& r);

}  // namespace hypersurf
