#include "hypersurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "hypersurf/geodesic.hpp"
#include "hypersurf/lelieuvre.hpp"

namespace hypersurf {

namespace {

double largest_corner_angle(const std::array<VertexState, 4>& q) {
    // Cyclic order f0, f1, f12, f2.
    const Vec3 p[4] = {q[0].position, q[1].position, q[3].position, q[2].position};
    double best = 0.0;
    for (int k = 0; k < 4; ++k) {
        const Vec3& prev = p[(k + 3) % 4];
        const Vec3& next = p[(k + 1) % 4];
        best = std::max(best, angle_between(prev - p[k], next - p[k]));
    }
    return best;
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json ref_json(const NodeRef& r) { return {{"sector", r.sector}, {"i", r.i}, {"j", r.j}}; }

}  // namespace

DiagnosticsReport compute_diagnostics(const SurfaceComplex& c, std::vector<StageStats> stages) {
    DiagnosticsReport r;
    r.sectors = c.sectors.size();
    r.stages = std::move(stages);
    r.singular_edge_margin = std::numbers::pi;

    for (const auto& s : c.sectors) {
        for (int i = 0; i < s.ni(); ++i) {
            for (int j = 0; j < s.nj(); ++j) {
                if (!s.quad_active(i, j)) continue;
                ++r.quads;
                const auto q = quad_corners(s, i, j);
                const QuadResiduals res = quad_residuals(q);
                r.max_compatibility = std::max(r.max_compatibility, compatibility_residual(q));
                r.max_tangency = std::max(r.max_tangency, res.tangency);
                r.max_edge_length = std::max(r.max_edge_length, res.edge_length);
                r.max_unit_norm = std::max(r.max_unit_norm, res.unit_norm);
                r.max_route = std::max(r.max_route, res.route);
                r.max_rho_closure = std::max(r.max_rho_closure, res.rho_closure);
                const double margin = std::numbers::pi - largest_corner_angle(q);
                if (margin < r.singular_edge_margin) {
                    r.singular_edge_margin = margin;
                    r.singular_edge_quad = {s.id(), i, j};
                }
            }
        }
    }

    r.validation = validate_complex(c);
    r.max_gluing_position_gap = r.validation.max_gluing_position_gap;
    r.max_gluing_normal_gap = r.validation.max_gluing_normal_gap;

    if (r.quads == 0) return r;
    const TriMesh mesh = triangulate_complex(c);
    r.vertices = mesh.vertices.size();
    r.triangles = mesh.triangles.size();
    r.obtuse_triangles = mesh.obtuse_triangles;
    r.max_triangle_angle = mesh.max_angle;

    const VertexIndex index(c);
    const Source origin{index.id(c.origin), 0.0};
    const FastMarchResult fm = fast_march(mesh, std::span<const Source>(&origin, 1));
    for (const auto& s : c.sectors) {
        if (s.boundary.corner) continue;
        for (int axis = 0; axis < 2; ++axis) {
            const BoundarySource& src = axis == 0 ? s.boundary.along_i : s.boundary.along_j;
            const auto* ray = std::get_if<RayBoundary>(&src);
            if (!ray || ray->split) continue;
            const int count = axis == 0 ? s.ni() : s.nj();
            for (int t = 1; t <= count; ++t) {
                const NodeRef node = axis == 0 ? NodeRef{s.id(), t, 0} : NodeRef{s.id(), 0, t};
                const double d = fm.distance[static_cast<std::size_t>(index.id(node))];
                r.boundary_arc_length_error =
                    std::max(r.boundary_arc_length_error, std::abs(d - static_cast<double>(t) * ray->spacing));
                ++r.boundary_nodes_checked;
            }
        }
    }
    return r;
}

std::string format_report(const DiagnosticsReport& r) {
    std::ostringstream out;
    out.precision(6);
    out << "sectors " << r.sectors << ", vertices " << r.vertices << ", quads " << r.quads << "\n\n";
    out << "quad residuals (max)\n";
    out << "  compatibility   " << r.max_compatibility << "\n";
    out << "  tangency        " << r.max_tangency << "\n";
    out << "  edge length     " << r.max_edge_length << "\n";
    out << "  unit normal     " << r.max_unit_norm << "\n";
    out << "  route           " << r.max_route << "\n";
    out << "  rho closure     " << r.max_rho_closure << "\n\n";
    out << "convergence\n";
    if (r.stages.empty()) out << "  (no stages recorded)\n";
    for (const auto& st : r.stages) {
        out << "  eps " << st.epsilon << ": " << st.iterations << " loops, CHANGE";
        for (double x : st.change_history) out << " " << x;
        out << "\n";
    }
    out << "\ngeodesic boundary check: max |D - arc length| " << r.boundary_arc_length_error << " over "
        << r.boundary_nodes_checked << " nodes\n";
    out << "gluing gaps: position " << r.max_gluing_position_gap << ", normal " << r.max_gluing_normal_gap << "\n";
    out << "triangulation: " << r.triangles << " triangles, " << r.obtuse_triangles << " obtuse, max angle "
        << r.max_triangle_angle << "\n";
    out << "singular-edge margin: " << r.singular_edge_margin << " at sector " << r.singular_edge_quad.sector
        << " quad (" << r.singular_edge_quad.i << "," << r.singular_edge_quad.j << ")\n\n";
    const ValidationReport& v = r.validation;
    out << "validation: " << (v.ok() ? "ok" : "FAILED") << "\n";
    out << "  edge labels " << (v.edge_labels_consistent ? "consistent" : "inconsistent") << ", checkering "
        << (v.two_colorable ? "ok" : "broken") << ", manifold edges " << (v.manifold_edges ? "ok" : "broken")
        << ", gluings " << (v.gluings_coincide ? "coincide" : "apart") << "\n";
    for (const auto& b : v.branch_vertices) {
        out << "  branch vertex at sector " << b.vertex.sector << " (" << b.vertex.i << "," << b.vertex.j << "): "
            << b.incident_quads << " quads\n";
    }
    for (const auto& f : v.failures) out << "  " << f << "\n";
    return out.str();
}

std::string report_json(const DiagnosticsReport& r) {
    nlohmann::json j;
    j["sectors"] = r.sectors;
    j["vertices"] = r.vertices;
    j["quads"] = r.quads;
    j["quad_residuals"] = {{"compatibility", number(r.max_compatibility)}, {"tangency", number(r.max_tangency)},
                           {"edge_length", number(r.max_edge_length)},     {"unit_norm", number(r.max_unit_norm)},
                           {"route", number(r.max_route)},                 {"rho_closure", number(r.max_rho_closure)}};
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& st : r.stages) {
        nlohmann::json hist = nlohmann::json::array();
        for (double x : st.change_history) hist.push_back(number(x));
        stages.push_back({{"epsilon", number(st.epsilon)}, {"iterations", st.iterations}, {"change_history", hist}});
    }
    j["stages"] = stages;
    j["boundary_arc_length"] = {{"max_error", number(r.boundary_arc_length_error)},
                                {"nodes_checked", r.boundary_nodes_checked}};
    j["gluing"] = {{"max_position_gap", number(r.max_gluing_position_gap)},
                   {"max_normal_gap", number(r.max_gluing_normal_gap)}};
    j["triangulation"] = {{"triangles", r.triangles},
                          {"obtuse", r.obtuse_triangles},
                          {"max_angle", number(r.max_triangle_angle)}};
    j["singular_edge_margin"] = {{"value", number(r.singular_edge_margin)}, {"quad", ref_json(r.singular_edge_quad)}};
    const ValidationReport& v = r.validation;
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& b : v.branch_vertices) branches.push_back({{"vertex", ref_json(b.vertex)}, {"incident_quads", b.incident_quads}});
    j["validation"] = {{"ok", v.ok()},
                       {"edge_labels_consistent", v.edge_labels_consistent},
                       {"two_colorable", v.two_colorable},
                       {"manifold_edges", v.manifold_edges},
                       {"gluings_coincide", v.gluings_coincide},
                       {"branch_vertices", branches},
                       {"failures", v.failures}};
    return j.dump(2) + "\n";
}

}  // namespace hypersurf
