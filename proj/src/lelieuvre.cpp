#include "hypersurf/lelieuvre.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

Vec3 scale_normal(const Vec3& n, double curvature) {
    if (!(curvature < 0.0)) {
        throw ConfigError("scale_normal requires negative curvature");
    }
    return n * std::pow(-curvature, -0.25);
}

QuadSolveOutputs quad_update_constant(const QuadSolveInputs& in) {
    const Vec3 w = in.n1 + in.n2;
    const double ww = norm2(w);
    if (!(ww > 0.0)) {
        throw DegenerateQuadError("degenerate quad: N1 + N2 = 0");
    }
    const double d = dot(w, in.n0);

    QuadSolveOutputs out;
    out.c = 2.0 * d / ww;
    out.alpha = 0.0;
    out.n12 = out.c * w - in.n0;
    const Vec3 step = cross(out.n12, in.n2);
    out.r12 = in.r2 + step;
    out.flat = norm2(step) == 0.0 || norm2(cross(out.n12, in.n1)) == 0.0;
    return out;
}

QuadSolveOutputs quad_update_variable(const QuadSolveInputs& in) {
    const Vec3 nu0 = std::sqrt(in.rho0) * in.n0;
    const Vec3 nu1 = std::sqrt(in.rho1) * in.n1;
    const Vec3 nu2 = std::sqrt(in.rho2) * in.n2;
    const Vec3 w = nu1 + nu2;
    const double ww = norm2(w);
    if (!(ww > 0.0)) {
        throw DegenerateQuadError("degenerate quad: nu1 + nu2 = 0");
    }
    const double d = dot(w, nu0);
    const double tau = 1e-12 * std::sqrt(ww) * norm(nu0);

    QuadSolveOutputs out;
    if (std::abs(d) > tau) {
        out.alpha = ww * (in.rho12 - in.rho0) / (d * d);
        if (1.0 + out.alpha < 0.0) {
            throw UnsolvableQuadError("quad unsolvable: curvature variation too large (1 + alpha = " +
                                      std::to_string(1.0 + out.alpha) + ")");
        }
        out.c = (1.0 + std::sqrt(1.0 + out.alpha)) * d / ww;
    } else {
        if (in.rho12 < in.rho0) {
            throw UnsolvableQuadError("quad unsolvable: curvature variation too large (orthogonal closure with rho12 < rho0)");
        }
        out.degenerate_branch = true;
        out.c = std::sqrt((in.rho12 - in.rho0) / ww);
    }

    const Vec3 nu12 = out.c * w - nu0;
    out.n12 = nu12 / std::sqrt(in.rho12);
    const Vec3 step = cross(nu12, nu2);
    out.r12 = in.r2 + step;
    out.flat = norm2(step) == 0.0 || norm2(cross(nu12, nu1)) == 0.0;
    return out;
}

namespace {

Vec3 rescaled(const VertexState& v) { return std::sqrt(v.rho) * v.normal; }

}  // namespace

double compatibility_residual(const std::array<VertexState, 4>& q) {
    return norm(cross(rescaled(q[3]) + rescaled(q[0]), rescaled(q[1]) + rescaled(q[2])));
}

QuadResiduals quad_residuals(const std::array<VertexState, 4>& q) {
    QuadResiduals res;
    static constexpr std::array<std::array<int, 2>, 4> kEdges{{{0, 1}, {0, 2}, {1, 3}, {2, 3}}};
    for (const auto& [a, b] : kEdges) {
        const VertexState& va = q[static_cast<std::size_t>(a)];
        const VertexState& vb = q[static_cast<std::size_t>(b)];
        const Vec3 dr = vb.position - va.position;
        res.tangency = std::max({res.tangency, std::abs(dot(dr, va.normal)), std::abs(dot(dr, vb.normal))});
        const double expected = std::sqrt(va.rho * vb.rho) * norm(cross(va.normal, vb.normal));
        res.edge_length = std::max(res.edge_length, std::abs(norm(dr) - expected));
    }
    for (const auto& v : q) {
        res.unit_norm = std::max(res.unit_norm, std::abs(norm(v.normal) - 1.0));
    }
    const Vec3 nu12 = rescaled(q[3]);
    res.route = norm(q[1].position - cross(nu12, rescaled(q[1])) - q[3].position);
    res.rho_closure = std::abs(norm2(nu12) - q[3].rho);
    return res;
}

namespace {

template <typename Update>
SectorGrid sweep_with(SectorGrid s, Update&& update) {
    for (int i = 1; i <= s.ni(); ++i) {
        for (int j = 1; j <= s.nj(); ++j) {
            if (!s.node_active(i, j)) continue;
            const auto idx = quad_corner_indices(s.parity(), i - 1, j - 1);
            const VertexState& f0 = s.at(idx[0][0], idx[0][1]);
            const VertexState& f1 = s.at(idx[1][0], idx[1][1]);
            const VertexState& f2 = s.at(idx[2][0], idx[2][1]);
            const QuadSolveInputs in{f0.position, f1.position, f2.position, f0.normal, f1.normal,
                                     f2.normal,   f0.rho,      f1.rho,      f2.rho,    1.0};
            try {
                update(s.at(i, j), in, i, j);
            } catch (const UnsolvableQuadError& e) {
                throw UnsolvableQuadError(std::string(e.what()) + " at sector " + std::to_string(s.id()) +
                                          " node (" + std::to_string(i) + "," + std::to_string(j) + ")");
            } catch (const DegenerateQuadError& e) {
                throw DegenerateQuadError(std::string(e.what()) + " at sector " + std::to_string(s.id()) +
                                          " node (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return s;
}

}  // namespace

SectorGrid sweep_sector(SectorGrid s, std::span<const double> rho_field) {
    if (rho_field.size() != s.node_count()) {
        throw ConfigError("rho field size does not match sector node count");
    }
    const int nj1 = s.nj() + 1;
    return sweep_with(std::move(s), [&](VertexState& out, QuadSolveInputs in, int i, int j) {
        in.rho12 = rho_field[static_cast<std::size_t>(i * nj1 + j)];
        const auto res = quad_update_variable(in);
        out.position = res.r12;
        out.normal = res.n12;
        out.rho = in.rho12;
    });
}

SectorGrid sweep_sector_constant(SectorGrid s) {
    return sweep_with(std::move(s), [](VertexState& out, const QuadSolveInputs& in, int, int) {
        const auto res = quad_update_constant(in);
        out.position = res.r12;
        out.normal = res.n12;
        out.rho = 1.0;
    });
}

}  // namespace hypersurf
