#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "hypersurf/mesh.hpp"
#include "hypersurf/vec3.hpp"

namespace hypersurf {

enum class CurvatureFamily { Constant, Linear, Ring };

/// K_eps(D) as a function of geodesic distance D from the origin.
///   Constant: -1
///   Linear:   -(1 + eps D)
///   Ring:     -1 for D <= radius, else -(1 + eps (gain (D - radius))^2)
struct CurvatureSpec {
    CurvatureFamily family = CurvatureFamily::Constant;
    double epsilon = 0.0;
    double ring_radius = 0.5;
    double ring_gain = 20.0;
};

double eval_curvature(const CurvatureSpec& spec, double d);

/// (-K)^(-1/2)
inline double rho_from_curvature(double k) { return 1.0 / std::sqrt(-k); }

inline double eval_rho(const CurvatureSpec& spec, double d) { return rho_from_curvature(eval_curvature(spec, d)); }

/// One Amsler sector: two straight boundary rays from the origin in the z = 0 plane.
/// I and J count quads in the u and v directions. `s_a` is the ray along grid index i,
/// `s_b` the ray along j; with Even parity the i ray carries the v direction.
struct SectorSpec {
    double phi1 = std::numbers::pi / 2;
    double u_max = 1.0;
    double v_max = 1.0;
    int I = 30;
    int J = 30;
    Vec3 s_a{1.0, 0.0, 0.0};
    Vec3 s_b{0.0, 1.0, 0.0};
    Parity parity = Parity::Odd;

    /// Principal sector: s_a = x axis, s_b at angle phi1 from it.
    static SectorSpec principal(double phi1, double u_max, double v_max, int I, int J);

    int ni() const { return parity == Parity::Odd ? I : J; }
    int nj() const { return parity == Parity::Odd ? J : I; }
    double spacing_i() const { return parity == Parity::Odd ? u_max / I : v_max / J; }
    double spacing_j() const { return parity == Parity::Odd ? v_max / J : u_max / I; }
};

struct IterationConfig {
    double tol = 1e-4;
    int max_iters = 100;
    std::vector<double> epsilon_schedule;
};

/// Increasing schedule ending at `target` with successive ratio 2, starting at or below 1.
std::vector<double> geometric_schedule(double target);

/// Writes geodesic distance from the complex origin into every active node.
using DistanceProvider = std::function<void(SurfaceComplex&)>;

DistanceProvider geodesic_distance_provider();

/// Sector with boundary rules set and boundary rows (i,0), (0,j) filled.
/// Throws NumericalError when a boundary step exceeds sqrt(rho_a rho_b) (grid too coarse).
SectorGrid init_boundary(const SectorSpec& spec, const CurvatureSpec& curv);

/// Re-evaluates the boundary rows of `sector` from its rules against the current complex.
void apply_boundary(SurfaceComplex& c, int sector, const CurvatureSpec& curv);

/// Interior rho from each node's current geodesic distance.
void update_rho_from_distance(SectorGrid& s, const CurvatureSpec& curv);

struct StageStats {
    double epsilon = 0.0;
    int iterations = 0;
    std::vector<double> change_history;
};

/// Constant-curvature sweep of the listed sectors after refreshing their boundaries.
void seed_constant(SurfaceComplex& c, const CurvatureSpec& curv, std::span<const int> sectors);

/// Outer fixed-point iteration: distance, curvature, re-sweep, until the maximal vertex
/// displacement drops below cfg.tol. Throws NonConvergenceError after cfg.max_iters loops.
StageStats converge(SurfaceComplex& c, const CurvatureSpec& curv, const IterationConfig& cfg,
                    const DistanceProvider& provider);

/// Runs `converge` once per schedule entry (or once at curv.epsilon when the schedule is empty),
/// each stage starting from the previous converged surface.
std::vector<StageStats> run_schedule(SurfaceComplex& c, CurvatureSpec curv, const IterationConfig& cfg,
                                     const DistanceProvider& provider);

struct SectorRun {
    SectorGrid grid;
    std::vector<StageStats> stages;
};

/// Single sector complex (origin at node (0,0)) with boundaries initialized.
SurfaceComplex make_sector_complex(const SectorSpec& spec, const CurvatureSpec& curv);

/// Seeded from the K = -1 sweep, converged at curv.epsilon.
SectorRun generate_sector(const SectorSpec& spec, const CurvatureSpec& curv, const IterationConfig& cfg,
                          const DistanceProvider& provider);

/// Seeded from the K = -1 sweep, then one converged stage per cfg.epsilon_schedule entry.
SectorRun continuation(const SectorSpec& spec, const CurvatureSpec& curv, const IterationConfig& cfg,
                       const DistanceProvider& provider);

/// 2n sectors around the origin with rays at the cumulative angles and alternating parity,
/// glued along shared rays. Boundaries filled, interiors empty.
SurfaceComplex make_patched_complex(std::span<const double> angles, double u_max, double v_max, int I, int J,
                                    const CurvatureSpec& curv);

std::vector<double> symmetric_angles(int n);

struct GenerationResult {
    SurfaceComplex complex;
    std::vector<StageStats> stages;
};

/// Patched complex, seeded and run through the schedule with distance measured on the whole
/// complex. Verifies normal continuity across every gluing.
GenerationResult patch_sectors(std::span<const double> angles, double u_max, double v_max, int I, int J,
                               const CurvatureSpec& curv, const IterationConfig& cfg,
                               const DistanceProvider& provider);

}  // namespace hypersurf
