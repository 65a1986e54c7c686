#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hypersurf/lelieuvre.hpp"
#include "hypersurf/mesh.hpp"

namespace hypersurf::testing {

struct QuadMaxima {
    double compatibility = 0.0;
    double tangency = 0.0;
    double edge_length = 0.0;
    double unit_norm = 0.0;
    double route = 0.0;
    double rho_closure = 0.0;
    std::size_t quads = 0;

    double worst() const { return std::max({compatibility, tangency, edge_length, unit_norm, route, rho_closure}); }
};

inline QuadMaxima quad_maxima(const SectorGrid& s) {
    QuadMaxima m;
    for (int i = 0; i < s.ni(); ++i) {
        for (int j = 0; j < s.nj(); ++j) {
            if (!s.quad_active(i, j)) continue;
            const auto q = quad_corners(s, i, j);
            const QuadResiduals r = quad_residuals(q);
            m.compatibility = std::max(m.compatibility, compatibility_residual(q));
            m.tangency = std::max(m.tangency, r.tangency);
            m.edge_length = std::max(m.edge_length, r.edge_length);
            m.unit_norm = std::max(m.unit_norm, r.unit_norm);
            m.route = std::max(m.route, r.route);
            m.rho_closure = std::max(m.rho_closure, r.rho_closure);
            ++m.quads;
        }
    }
    return m;
}

inline QuadMaxima quad_maxima(const SurfaceComplex& c, std::span<const int> only = {}) {
    QuadMaxima all;
    for (const auto& s : c.sectors) {
        if (!only.empty() && std::find(only.begin(), only.end(), s.id()) == only.end()) continue;
        const QuadMaxima m = quad_maxima(s);
        all.compatibility = std::max(all.compatibility, m.compatibility);
        all.tangency = std::max(all.tangency, m.tangency);
        all.edge_length = std::max(all.edge_length, m.edge_length);
        all.unit_norm = std::max(all.unit_norm, m.unit_norm);
        all.route = std::max(all.route, m.route);
        all.rho_closure = std::max(all.rho_closure, m.rho_closure);
        all.quads += m.quads;
    }
    return all;
}

/// Planar (i+j)-split grid on [0, w] x [0, h] with nx x ny squares; vertex (i, j) has index i * (ny + 1) + j.
struct FlatGrid {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

inline FlatGrid flat_grid(int nx, int ny, double w, double h) {
    FlatGrid g;
    for (int i = 0; i <= nx; ++i) {
        for (int j = 0; j <= ny; ++j) g.vertices.push_back({w * i / nx, h * j / ny, 0.0});
    }
    const auto id = [&](int i, int j) { return i * (ny + 1) + j; };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            g.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            g.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return g;
}

}  // namespace hypersurf::testing
