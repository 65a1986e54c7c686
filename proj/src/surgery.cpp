#include "hypersurf/surgery.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

struct CornerEdges {
    Vec3 u;
    Vec3 v;
};

CornerEdges corner_edges(const SectorGrid& s, int b) {
    const Vec3& r = s.at(b, b).position;
    if (s.parity() == Parity::Odd) return {s.at(b + 1, b).position - r, s.at(b, b + 1).position - r};
    return {s.at(b, b + 1).position - r, s.at(b + 1, b).position - r};
}

BoundaryRun u_line(const SectorGrid& s, int b) {
    return s.parity() == Parity::Odd ? BoundaryRun{{s.id(), b, b}, 1, 0} : BoundaryRun{{s.id(), b, b}, 0, 1};
}

BoundaryRun v_line(const SectorGrid& s, int b) {
    return s.parity() == Parity::Odd ? BoundaryRun{{s.id(), b, b}, 0, 1} : BoundaryRun{{s.id(), b, b}, 1, 0};
}

}  // namespace

SplitAxes split_angle_axes(const SectorGrid& sector, int b, int m) {
    if (m < 1) throw ConfigError("m must be positive");
    if (b < 0 || b + 1 > sector.ni() || b + 1 > sector.nj()) throw ConfigError("cut corner out of range");
    const auto [eu, ev] = corner_edges(sector, b);
    if (!(norm(eu) > 0.0) || !(norm(ev) > 0.0)) {
        throw DegenerateQuadError("zero-length edge at cut corner (" + std::to_string(b) + "," + std::to_string(b) + ")");
    }
    const Vec3& normal = sector.at(b, b).normal;

    SplitAxes out;
    out.theta = angle_between(eu, ev);
    out.singular_edge = out.theta >= std::numbers::pi - 1e-6;
    out.sense = dot(cross(eu, ev), normal) < 0.0 ? -1.0 : 1.0;
    for (int k = 1; k < m; ++k) {
        out.directions.push_back(normalized(rotate(eu, normal, out.sense * k * out.theta / m)));
    }
    return out;
}

SurfaceComplex attach_branch_sectors(SurfaceComplex c, const SurgerySpec& spec, const CurvatureSpec& curv) {
    if (spec.sector < 0 || static_cast<std::size_t>(spec.sector) >= c.sectors.size()) {
        throw ConfigError("surgery target sector " + std::to_string(spec.sector) + " does not exist");
    }
    if (spec.m < 1) throw ConfigError("m must be positive");
    SectorGrid& host = c.sectors[static_cast<std::size_t>(spec.sector)];
    if (host.ni() != host.nj()) throw ConfigError("surgery needs a square sector (I = J)");
    if (host.cut()) throw ConfigError("sector " + std::to_string(spec.sector) + " already has a branch point");
    if (spec.b < 1 || spec.b >= host.ni()) throw ConfigError("cut index must satisfy 1 <= b < I");
    for (const auto& g : c.gluings) {
        for (const BoundaryRun* run : {&g.side_a, &g.side_b}) {
            for (int t = 0; t < g.count; ++t) {
                const NodeRef r = run->at(t);
                if (r.sector == spec.sector && r.i > spec.b && r.j > spec.b) {
                    throw ConfigError("cut square overlaps a glued boundary of sector " + std::to_string(spec.sector));
                }
            }
        }
    }

    const int b = spec.b;
    const int size = spec.size.value_or(host.ni() - b);
    if (size < 1 || size > host.ni() - b) throw ConfigError("new sector size must lie in [1, I - b]");

    const SplitAxes axes = split_angle_axes(host, b, spec.m);
    const auto [eu, ev] = corner_edges(host, b);
    const double spacing = spec.spacing.value_or(0.5 * (norm(eu) + norm(ev)));
    if (!(spacing > 0.0)) throw ConfigError("new boundary spacing must be positive");

    const BoundaryRun host_u = u_line(host, b);
    const BoundaryRun host_v = v_line(host, b);
    host.set_cut(b);

    SurgeryRecord record;
    record.host = spec.sector;
    record.b = b;
    record.m = spec.m;
    record.theta = axes.theta;
    record.spacing = spacing;

    const int first = static_cast<int>(c.sectors.size());
    const auto axis = [&](int k) { return SplitAxis{spec.sector, b, axes.sense * k * axes.theta / spec.m}; };
    for (int k = 1; k <= spec.m; ++k) {
        SectorGrid s(first + k - 1, size, size, parity_for_sector_number(k));
        s.boundary.corner = NodeRef{spec.sector, b, b};
        if (k == 1) {
            s.boundary.along_i = InheritedBoundary{host_u};
        } else {
            s.boundary.along_i = RayBoundary{axes.directions[static_cast<std::size_t>(k - 2)], spacing, axis(k - 1)};
        }
        if (k == spec.m) {
            s.boundary.along_j = InheritedBoundary{host_v};
        } else {
            s.boundary.along_j = RayBoundary{axes.directions[static_cast<std::size_t>(k - 1)], spacing, axis(k)};
        }
        record.new_sectors.push_back(s.id());
        c.sectors.push_back(std::move(s));
    }

    c.gluings.push_back({BoundaryRun{{first, 0, 0}, 1, 0}, host_u, size + 1, normalized(eu)});
    for (int k = 1; k < spec.m; ++k) {
        c.gluings.push_back({BoundaryRun{{first + k - 1, 0, 0}, 0, 1}, BoundaryRun{{first + k, 0, 0}, 1, 0}, size + 1,
                             axes.directions[static_cast<std::size_t>(k - 1)]});
    }
    c.gluings.push_back({BoundaryRun{{first + spec.m - 1, 0, 0}, 0, 1}, host_v, size + 1, normalized(ev)});

    for (int id : record.new_sectors) apply_boundary(c, id, curv);

    c.surgeries.push_back(record);
    c.branch_points.push_back({NodeRef{spec.sector, b, b}, quad_incidence(c, NodeRef{spec.sector, b, b})});
    return c;
}

SurfaceComplex insert_branch_point(SurfaceComplex c, const SurgerySpec& spec, const CurvatureSpec& curv,
                                   const IterationConfig& cfg, const DistanceProvider& provider, StageStats* stats) {
    if (spec.m < 3 || spec.m % 2 == 0) {
        throw ConfigError("m must be odd and at least 3: with an even number of new sectors there is no "
                          "consistent u/v edge labelling");
    }
    c = attach_branch_sectors(std::move(c), spec, curv);
    seed_constant(c, curv, c.surgeries.back().new_sectors);
    StageStats result = converge(c, curv, cfg, provider);
    if (stats) *stats = std::move(result);
    return c;
}

}  // namespace hypersurf
