#include "hypersurf/amsler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "hypersurf/errors.hpp"
#include "hypersurf/geodesic.hpp"
#include "hypersurf/lelieuvre.hpp"

namespace hypersurf {

double eval_curvature(const CurvatureSpec& spec, double d) {
    switch (spec.family) {
        case CurvatureFamily::Constant:
            return -1.0;
        case CurvatureFamily::Linear:
            return -(1.0 + spec.epsilon * d);
        case CurvatureFamily::Ring: {
            if (d <= spec.ring_radius) return -1.0;
            const double s = spec.ring_gain * (d - spec.ring_radius);
            return -(1.0 + spec.epsilon * s * s);
        }
    }
    return -1.0;
}

SectorSpec SectorSpec::principal(double phi1, double u_max, double v_max, int I, int J) {
    if (!(phi1 > 0.0 && phi1 < std::numbers::pi)) throw ConfigError("phi1 must lie in (0, pi)");
    if (!(u_max > 0.0 && v_max > 0.0)) throw ConfigError("u_max and v_max must be positive");
    SectorSpec s;
    s.phi1 = phi1;
    s.u_max = u_max;
    s.v_max = v_max;
    s.I = I;
    s.J = J;
    s.s_a = {1.0, 0.0, 0.0};
    s.s_b = {std::cos(phi1), std::sin(phi1), 0.0};
    return s;
}

std::vector<double> geometric_schedule(double target) {
    if (!(target >= 0.0)) throw ConfigError("target epsilon must be nonnegative");
    std::vector<double> steps{target};
    while (steps.back() > 1.0) steps.push_back(steps.back() / 2.0);
    std::reverse(steps.begin(), steps.end());
    return steps;
}

DistanceProvider geodesic_distance_provider() {
    return [](SurfaceComplex& c) { assign_geodesic_distance(c); };
}

namespace {

VertexState origin_state(const CurvatureSpec& curv) {
    VertexState v;
    v.position = {0.0, 0.0, 0.0};
    v.normal = {0.0, 0.0, 1.0};
    v.rho = eval_rho(curv, 0.0);
    v.geo_dist = 0.0;
    return v;
}

Vec3 split_axis_direction(const SurfaceComplex& c, const SplitAxis& axis) {
    const SectorGrid& host = c.sectors.at(static_cast<std::size_t>(axis.host));
    const VertexState& corner = host.at(axis.b, axis.b);
    const VertexState& u_next =
        host.parity() == Parity::Odd ? host.at(axis.b + 1, axis.b) : host.at(axis.b, axis.b + 1);
    return normalized(rotate(u_next.position - corner.position, corner.normal, axis.angle));
}

/// Fills nodes corner + t * step for t = 0..count along a straight ray.
template <typename Node>
void fill_ray(const VertexState& corner, const Vec3& dir, double h, EdgeLabel label, int count,
              const CurvatureSpec& curv, Node&& node, int sector, const char* which) {
    // u-edges satisfy r_{t+1} - r_t = nu_{t+1} x nu_t, v-edges the opposite sign; with
    // N_t orthogonal to the ray this fixes the rotation sense about it.
    const Vec3 axis = label == EdgeLabel::U ? -dir : dir;
    VertexState prev = corner;
    node(0) = corner;
    for (int t = 1; t <= count; ++t) {
        VertexState next;
        next.position = corner.position + (static_cast<double>(t) * h) * dir;
        next.geo_dist = corner.geo_dist + static_cast<double>(t) * h;
        next.rho = eval_rho(curv, next.geo_dist);
        const double arg = h / std::sqrt(prev.rho * next.rho);
        if (!(arg <= 1.0)) {
            throw NumericalError("grid too coarse for prescribed curvature on sector " + std::to_string(sector) +
                                 " boundary " + which + " at step " + std::to_string(t));
        }
        next.normal = rotate(prev.normal, axis, std::asin(arg));
        node(t) = next;
        prev = next;
    }
}

void fill_boundary(SurfaceComplex& c, SectorGrid& s, const BoundarySource& src, bool along_i,
                   const VertexState& corner, const CurvatureSpec& curv) {
    const int count = along_i ? s.ni() : s.nj();
    const auto node = [&](int t) -> VertexState& { return along_i ? s.at(t, 0) : s.at(0, t); };
    if (const auto* ray = std::get_if<RayBoundary>(&src)) {
        const Vec3 dir = ray->split ? split_axis_direction(c, *ray->split) : ray->direction;
        const EdgeLabel label = along_i ? s.label_along_i() : s.label_along_j();
        fill_ray(corner, dir, ray->spacing, label, count, curv, node, s.id(), along_i ? "i" : "j");
    } else {
        const auto& inherited = std::get<InheritedBoundary>(src);
        for (int t = 0; t <= count; ++t) node(t) = c.node(inherited.source.at(t));
    }
}

}  // namespace

void apply_boundary(SurfaceComplex& c, int sector, const CurvatureSpec& curv) {
    SectorGrid& s = c.sectors.at(static_cast<std::size_t>(sector));
    const VertexState corner = s.boundary.corner ? c.node(*s.boundary.corner) : origin_state(curv);
    fill_boundary(c, s, s.boundary.along_i, true, corner, curv);
    fill_boundary(c, s, s.boundary.along_j, false, corner, curv);
}

SectorGrid init_boundary(const SectorSpec& spec, const CurvatureSpec& curv) {
    SurfaceComplex c = make_sector_complex(spec, curv);
    return std::move(c.sectors.front());
}

SurfaceComplex make_sector_complex(const SectorSpec& spec, const CurvatureSpec& curv) {
    if (!(spec.u_max > 0.0 && spec.v_max > 0.0)) throw ConfigError("u_max and v_max must be positive");
    SurfaceComplex c;
    SectorGrid s(0, spec.ni(), spec.nj(), spec.parity);
    s.boundary.along_i = RayBoundary{spec.s_a, spec.spacing_i(), std::nullopt};
    s.boundary.along_j = RayBoundary{spec.s_b, spec.spacing_j(), std::nullopt};
    c.sectors.push_back(std::move(s));
    c.origin = {0, 0, 0};
    apply_boundary(c, 0, curv);
    return c;
}

void update_rho_from_distance(SectorGrid& s, const CurvatureSpec& curv) {
    for (int i = 1; i <= s.ni(); ++i) {
        for (int j = 1; j <= s.nj(); ++j) {
            if (!s.node_active(i, j)) continue;
            VertexState& v = s.at(i, j);
            if (!std::isfinite(v.geo_dist)) {
                throw NumericalError("geodesic distance unavailable at sector " + std::to_string(s.id()) + " node (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            }
            v.rho = eval_rho(curv, v.geo_dist);
        }
    }
}

void seed_constant(SurfaceComplex& c, const CurvatureSpec& curv, std::span<const int> sectors) {
    for (int k : sectors) {
        apply_boundary(c, k, curv);
        auto& s = c.sectors.at(static_cast<std::size_t>(k));
        s = sweep_sector_constant(std::move(s));
    }
}

namespace {

std::vector<double> rho_field(const SectorGrid& s) {
    std::vector<double> field(s.node_count(), 1.0);
    const int nj1 = s.nj() + 1;
    for (int i = 0; i <= s.ni(); ++i) {
        for (int j = 0; j <= s.nj(); ++j) field[static_cast<std::size_t>(i * nj1 + j)] = s.at(i, j).rho;
    }
    return field;
}

}  // namespace

StageStats converge(SurfaceComplex& c, const CurvatureSpec& curv, const IterationConfig& cfg,
                    const DistanceProvider& provider) {
    if (!(cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (cfg.max_iters < 1) throw ConfigError("max_iters must be at least 1");
    StageStats stats;
    stats.epsilon = curv.epsilon;

    for (int n = 0; n < cfg.max_iters; ++n) {
        provider(c);
        double change = 0.0;
        for (std::size_t k = 0; k < c.sectors.size(); ++k) {
            const SectorGrid previous = c.sectors[k];
            update_rho_from_distance(c.sectors[k], curv);
            apply_boundary(c, static_cast<int>(k), curv);
            auto& s = c.sectors[k];
            const auto field = rho_field(s);
            s = sweep_sector(std::move(s), field);
            for (int i = 0; i <= s.ni(); ++i) {
                for (int j = 0; j <= s.nj(); ++j) {
                    if (!s.node_active(i, j)) continue;
                    change = std::max(change, distance(s.at(i, j).position, previous.at(i, j).position));
                }
            }
        }
        if (!std::isfinite(change)) {
            stats.change_history.push_back(change);
            throw NonConvergenceError("outer iteration produced non-finite positions at loop " + std::to_string(n + 1),
                                      stats.change_history);
        }
        stats.change_history.push_back(change);
        stats.iterations = n + 1;
        if (change < cfg.tol) return stats;
    }
    throw NonConvergenceError("outer iteration did not reach tolerance in " + std::to_string(cfg.max_iters) +
                                  " loops (last change " + std::to_string(stats.change_history.back()) + ")",
                              stats.change_history);
}

std::vector<StageStats> run_schedule(SurfaceComplex& c, CurvatureSpec curv, const IterationConfig& cfg,
                                     const DistanceProvider& provider) {
    std::vector<double> schedule = cfg.epsilon_schedule;
    if (schedule.empty()) schedule.push_back(curv.epsilon);
    if (!std::is_sorted(schedule.begin(), schedule.end())) throw ConfigError("epsilon schedule must be nondecreasing");

    std::vector<StageStats> stages;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        curv.epsilon = schedule[k];
        try {
            stages.push_back(converge(c, curv, cfg, provider));
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError("stage " + std::to_string(k) + " (epsilon " + std::to_string(schedule[k]) +
                                          "): " + e.what(),
                                      e.change_history);
        } catch (const UnsolvableQuadError& e) {
            throw UnsolvableQuadError("stage " + std::to_string(k) + " (epsilon " + std::to_string(schedule[k]) +
                                      "): " + e.what());
        } catch (const DegenerateQuadError& e) {
            throw DegenerateQuadError("stage " + std::to_string(k) + " (epsilon " + std::to_string(schedule[k]) +
                                      "): " + e.what());
        } catch (const ConfigError&) {
            throw;
        } catch (const NumericalError& e) {
            throw NumericalError("stage " + std::to_string(k) + " (epsilon " + std::to_string(schedule[k]) +
                                 "): " + e.what());
        }
    }
    return stages;
}

namespace {

std::vector<int> all_sectors(const SurfaceComplex& c) {
    std::vector<int> ids(c.sectors.size());
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<int>(k);
    return ids;
}

CurvatureSpec first_stage(CurvatureSpec curv, const IterationConfig& cfg) {
    if (!cfg.epsilon_schedule.empty()) curv.epsilon = cfg.epsilon_schedule.front();
    return curv;
}

}  // namespace

SectorRun generate_sector(const SectorSpec& spec, const CurvatureSpec& curv, const IterationConfig& cfg,
                          const DistanceProvider& provider) {
    SurfaceComplex c = make_sector_complex(spec, curv);
    seed_constant(c, curv, all_sectors(c));
    IterationConfig single = cfg;
    single.epsilon_schedule = {curv.epsilon};
    auto stages = run_schedule(c, curv, single, provider);
    return {std::move(c.sectors.front()), std::move(stages)};
}

SectorRun continuation(const SectorSpec& spec, const CurvatureSpec& curv, const IterationConfig& cfg,
                       const DistanceProvider& provider) {
    const CurvatureSpec start = first_stage(curv, cfg);
    SurfaceComplex c = make_sector_complex(spec, start);
    seed_constant(c, start, all_sectors(c));
    auto stages = run_schedule(c, curv, cfg, provider);
    return {std::move(c.sectors.front()), std::move(stages)};
}

std::vector<double> symmetric_angles(int n) {
    if (n < 2) throw ConfigError("need at least 2n = 4 sectors");
    return std::vector<double>(static_cast<std::size_t>(2 * n), std::numbers::pi / n);
}

SurfaceComplex make_patched_complex(std::span<const double> angles, double u_max, double v_max, int I, int J,
                                    const CurvatureSpec& curv) {
    const std::size_t count = angles.size();
    if (count < 4 || count % 2 != 0) throw ConfigError("patching needs an even number (>= 4) of sectors");
    double sum = 0.0;
    for (double a : angles) {
        if (!(a > 0.0 && a < std::numbers::pi)) throw ConfigError("sector angles must lie in (0, pi)");
        sum += a;
    }
    if (std::abs(sum - 2.0 * std::numbers::pi) > 1e-12) {
        throw ConfigError("sector angles must sum to 2 pi (got " + std::to_string(sum) + ")");
    }
    if (!(u_max > 0.0 && v_max > 0.0)) throw ConfigError("u_max and v_max must be positive");

    std::vector<Vec3> rays;
    double phi = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        rays.push_back({std::cos(phi), std::sin(phi), 0.0});
        phi += angles[k];
    }

    SurfaceComplex c;
    c.origin = {0, 0, 0};
    for (std::size_t k = 0; k < count; ++k) {
        SectorSpec spec;
        spec.u_max = u_max;
        spec.v_max = v_max;
        spec.I = I;
        spec.J = J;
        spec.phi1 = angles[k];
        spec.parity = parity_for_sector_number(static_cast<int>(k) + 1);
        spec.s_a = rays[k];
        spec.s_b = rays[(k + 1) % count];
        SectorGrid s(static_cast<int>(k), spec.ni(), spec.nj(), spec.parity);
        s.boundary.along_i = RayBoundary{spec.s_a, spec.spacing_i(), std::nullopt};
        s.boundary.along_j = RayBoundary{spec.s_b, spec.spacing_j(), std::nullopt};
        c.sectors.push_back(std::move(s));
    }
    for (std::size_t k = 0; k < count; ++k) {
        const auto next = (k + 1) % count;
        const int nodes = c.sectors[k].nj() + 1;
        c.gluings.push_back({BoundaryRun{{static_cast<int>(k), 0, 0}, 0, 1},
                             BoundaryRun{{static_cast<int>(next), 0, 0}, 1, 0}, nodes, rays[next]});
    }
    for (std::size_t k = 0; k < count; ++k) apply_boundary(c, static_cast<int>(k), curv);
    return c;
}

GenerationResult patch_sectors(std::span<const double> angles, double u_max, double v_max, int I, int J,
                               const CurvatureSpec& curv, const IterationConfig& cfg,
                               const DistanceProvider& provider) {
    const CurvatureSpec start = first_stage(curv, cfg);
    GenerationResult out;
    out.complex = make_patched_complex(angles, u_max, v_max, I, J, start);
    seed_constant(out.complex, start, all_sectors(out.complex));
    out.stages = run_schedule(out.complex, curv, cfg, provider);

    const auto report = validate_complex(out.complex);
    if (!(report.max_gluing_normal_gap < 1e-10) || !(report.max_gluing_position_gap < 1e-10)) {
        throw NumericalError("normal map discontinuous across a gluing (gap " +
                             std::to_string(report.max_gluing_normal_gap) + ")");
    }
    return out;
}

}  // namespace hypersurf
