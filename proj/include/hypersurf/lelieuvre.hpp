#pragma once

#include <array>
#include <span>

#include "hypersurf/mesh.hpp"
#include "hypersurf/vec3.hpp"

namespace hypersurf {

/// Known data on three corners of an elementary quad plus the curvature target at the fourth.
/// Index 1 is the u-neighbour of corner 0, index 2 the v-neighbour.
struct QuadSolveInputs {
    Vec3 r0, r1, r2;
    Vec3 n0, n1, n2;
    double rho0 = 1.0;
    double rho1 = 1.0;
    double rho2 = 1.0;
    double rho12 = 1.0;
};

struct QuadSolveOutputs {
    Vec3 n12;
    Vec3 r12;
    double c = 0.0;
    double alpha = 0.0;
    bool degenerate_branch = false;  // |<w, nu0>| below threshold; C from the direct quadratic
    bool flat = false;               // closing edges have zero length
};

/// nu = (-K)^(-1/4) N. Throws ConfigError unless K < 0.
Vec3 scale_normal(const Vec3& n, double curvature);

/// Closure for K = -1: N12 is the reflection of -N0 through the plane normal to N1 + N2.
QuadSolveOutputs quad_update_constant(const QuadSolveInputs& in);

/// Closure with prescribed rho at all four corners. r12 is taken along the 0 -> 2 -> 12 route.
///
/// nu12 = C (nu1 + nu2) - nu0 with C chosen on the branch continuous with the
/// constant-curvature reflection so that |nu12|^2 = rho12.
/// Throws UnsolvableQuadError when no real C exists, DegenerateQuadError when nu1 + nu2 = 0.
QuadSolveOutputs quad_update_variable(const QuadSolveInputs& in);

/// ||(nu12 + nu0) x (nu1 + nu2)|| for corners ordered (f0, f1, f2, f12).
double compatibility_residual(const std::array<VertexState, 4>& q);

struct QuadResiduals {
    double tangency = 0.0;     // max |<edge, endpoint normal>|
    double edge_length = 0.0;  // max | |dr| - sqrt(rho_a rho_b) |N_a x N_b| |
    double unit_norm = 0.0;    // max | |N| - 1 |
    double route = 0.0;        // |(r1 - nu12 x nu1) - r12|
    double rho_closure = 0.0;  // | |nu12|^2 - rho12 |
};

QuadResiduals quad_residuals(const std::array<VertexState, 4>& q);

/// Fills every active interior node (i, j >= 1) from its three predecessors in row-major order.
/// `rho_field` holds one value per node in row-major (i, j) order; interior entries become the
/// targets rho12. Boundary nodes are left untouched. Quad failures are rethrown with the node index.
SectorGrid sweep_sector(SectorGrid s, std::span<const double> rho_field);

/// Same traversal using the constant-curvature closure; interior rho is set to 1.
SectorGrid sweep_sector_constant(SectorGrid s);

}  // namespace hypersurf
