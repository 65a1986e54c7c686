#pragma once

#include <optional>
#include <vector>

#include "hypersurf/amsler.hpp"
#include "hypersurf/mesh.hpp"

namespace hypersurf {

/// Excise B = {b <= i, j <= I} from `sector` and refill it with m new sectors meeting at (b, b).
struct SurgerySpec {
    int sector = 0;
    int b = 1;
    int m = 3;
    std::optional<double> spacing;  // default: mean edge length at the cut corner
    std::optional<int> size;        // default: I - b
};

struct SplitAxes {
    double theta = 0.0;  // angle between the u- and v-edges at (b, b)
    std::vector<Vec3> directions;
    bool singular_edge = false;  // theta within 1e-6 of pi
    double sense = 1.0;          // +1 when rotating about N_bb carries e_u towards e_v
};

/// m - 1 unit directions splitting the corner angle at (b, b) into m equal parts, in the
/// tangent plane at that node.
SplitAxes split_angle_axes(const SectorGrid& sector, int b, int m);

/// Topology and boundary data of the branch: cuts the host, appends m sectors with their
/// boundary rules and gluings, and records the surgery. No sweeps and no parity check on m.
SurfaceComplex attach_branch_sectors(SurfaceComplex c, const SurgerySpec& spec, const CurvatureSpec& curv);

/// Full surgery: rejects even m, attaches the branch, seeds the new sectors and re-converges
/// the whole complex at curv.epsilon.
SurfaceComplex insert_branch_point(SurfaceComplex c, const SurgerySpec& spec, const CurvatureSpec& curv,
                                   const IterationConfig& cfg, const DistanceProvider& provider,
                                   StageStats* stats = nullptr);

}  // namespace hypersurf
