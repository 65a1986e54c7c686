#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypersurf/vec3.hpp"

namespace hypersurf {

/// Sentinel for a geodesic distance that has not been computed.
inline constexpr double kUnsetDistance = std::numeric_limits<double>::infinity();

struct VertexState {
    Vec3 position;
    Vec3 normal{0.0, 0.0, 1.0};
    double rho = 1.0;  // (-K)^(-1/2)
    double geo_dist = kUnsetDistance;
};

/// Odd: the u direction runs along grid index i. Even: u runs along j.
enum class Parity { Odd, Even };

enum class EdgeLabel { U, V };

inline Parity parity_for_sector_number(int k) { return (k % 2 != 0) ? Parity::Odd : Parity::Even; }

struct NodeRef {
    int sector = 0;
    int i = 0;
    int j = 0;

    friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

/// A straight run of boundary nodes start, start + (di,dj), start + 2(di,dj), ...
struct BoundaryRun {
    NodeRef start;
    int di = 0;
    int dj = 0;

    NodeRef at(int t) const { return {start.sector, start.i + t * di, start.j + t * dj}; }
    friend bool operator==(const BoundaryRun&, const BoundaryRun&) = default;
};

/// Direction obtained by rotating the host's u-edge at (b,b) about the host normal there.
struct SplitAxis {
    int host = 0;
    int b = 0;
    double angle = 0.0;  // signed, right-handed about N_bb
    friend bool operator==(const SplitAxis&, const SplitAxis&) = default;
};

/// Straight boundary line leaving the sector corner. Positions are evenly spaced; normals are
/// rotated about the line so the discrete Lelieuvre relations hold along it.
struct RayBoundary {
    Vec3 direction;  // used when `split` is empty
    double spacing = 0.0;
    std::optional<SplitAxis> split;
    friend bool operator==(const RayBoundary&, const RayBoundary&) = default;
};

/// Boundary copied verbatim from existing nodes of another sector.
struct InheritedBoundary {
    BoundaryRun source;
    friend bool operator==(const InheritedBoundary&, const InheritedBoundary&) = default;
};

using BoundarySource = std::variant<RayBoundary, InheritedBoundary>;

struct SectorBoundary {
    std::optional<NodeRef> corner;  // empty: the complex origin, r = 0 and N = +z
    BoundarySource along_i;         // nodes (t, 0)
    BoundarySource along_j;         // nodes (0, t)
};

class SectorGrid {
public:
    SectorGrid() = default;
    SectorGrid(int id, int ni, int nj, Parity parity);

    int id() const { return id_; }
    int ni() const { return ni_; }
    int nj() const { return nj_; }
    Parity parity() const { return parity_; }
    std::size_t node_count() const { return nodes_.size(); }

    VertexState& at(int i, int j) { return nodes_[index(i, j)]; }
    const VertexState& at(int i, int j) const { return nodes_[index(i, j)]; }

    bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i <= ni_ && j <= nj_; }

    /// Nodes strictly inside the excised corner square are inactive.
    bool node_active(int i, int j) const {
        return in_range(i, j) && !(cut_ && i > *cut_ && j > *cut_);
    }
    bool quad_active(int i, int j) const {
        return i >= 0 && j >= 0 && i < ni_ && j < nj_ && !(cut_ && i >= *cut_ && j >= *cut_);
    }

    std::optional<int> cut() const { return cut_; }
    void set_cut(int b);

    EdgeLabel label_along_i() const { return parity_ == Parity::Odd ? EdgeLabel::U : EdgeLabel::V; }
    EdgeLabel label_along_j() const { return parity_ == Parity::Odd ? EdgeLabel::V : EdgeLabel::U; }

    SectorBoundary boundary;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(nj_ + 1) + static_cast<std::size_t>(j);
    }

    int id_ = 0;
    int ni_ = 0;
    int nj_ = 0;
    Parity parity_ = Parity::Odd;
    std::optional<int> cut_;
    std::vector<VertexState> nodes_;
};

/// Two boundary runs of equal length that are the same curve on the surface.
struct GluingMap {
    BoundaryRun side_a;
    BoundaryRun side_b;
    int count = 0;
    Vec3 ray;  // shared ray direction where known (zero for curved seams)
};

struct BranchPoint {
    NodeRef vertex;
    int incident_quads = 0;
};

/// Record of one surgery, kept so the complex can be re-converged and serialized.
struct SurgeryRecord {
    int host = 0;
    int b = 0;
    int m = 0;
    double theta = 0.0;
    double spacing = 0.0;
    std::vector<int> new_sectors;
};

struct SurfaceComplex {
    std::vector<SectorGrid> sectors;
    std::vector<GluingMap> gluings;
    std::vector<BranchPoint> branch_points;
    std::vector<SurgeryRecord> surgeries;
    NodeRef origin;

    VertexState& node(const NodeRef& r) { return sectors.at(r.sector).at(r.i, r.j); }
    const VertexState& node(const NodeRef& r) const { return sectors.at(r.sector).at(r.i, r.j); }
};

/// f0, f1, f2, f12 grid positions of quad (i,j); f1 is the u-neighbour of f0.
std::array<std::array<int, 2>, 4> quad_corner_indices(Parity parity, int i, int j);

/// States (f0, f1, f2, f12) of quad (i,j). Throws std::out_of_range for a bad index.
std::array<VertexState, 4> quad_corners(const SectorGrid& s, int i, int j);

/// Identification of glued storage slots into single vertices, in deterministic order
/// (sector, then row-major).
class VertexIndex {
public:
    explicit VertexIndex(const SurfaceComplex& c);

    std::size_t size() const { return representatives_.size(); }
    /// -1 for inactive nodes.
    int id(const NodeRef& r) const;
    const NodeRef& representative(int id) const { return representatives_[static_cast<std::size_t>(id)]; }
    const std::vector<NodeRef>& members(int id) const { return members_[static_cast<std::size_t>(id)]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<int> nj1_;
    std::vector<int> ids_;
    std::vector<NodeRef> representatives_;
    std::vector<std::vector<NodeRef>> members_;
};

struct ValidationReport {
    bool edge_labels_consistent = true;
    bool two_colorable = true;
    bool manifold_edges = true;
    bool gluings_coincide = true;
    double max_gluing_position_gap = 0.0;
    double max_gluing_normal_gap = 0.0;
    std::vector<BranchPoint> branch_vertices;  // interior vertices with incidence != 4
    std::vector<std::string> failures;

    bool ok() const { return edge_labels_consistent && two_colorable && manifold_edges && gluings_coincide; }
};

/// Structural checks of an asymptotic complex: u/v edge labels, checkering, gluing residuals.
ValidationReport validate_complex(const SurfaceComplex& c, double gluing_tolerance = 1e-10);

/// Number of active quads incident to the glued vertex containing `r`.
int quad_incidence(const SurfaceComplex& c, const NodeRef& r);

}  // namespace hypersurf
