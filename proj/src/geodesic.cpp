#include "hypersurf/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <string>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

double triangle_max_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    return std::max({angle_between(b - a, c - a), angle_between(a - b, c - b), angle_between(a - c, b - c)});
}

bool triangle_degenerate(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double twice_area = norm(cross(b - a, c - a));
    const double longest = std::max({distance(a, b), distance(b, c), distance(c, a)});
    return !(twice_area > 1e-14 * longest * longest);
}

constexpr double kObtuseSlack = 1e-9;

/// 0: split along a-c, 1: along b-d, -1: both splits degenerate.
int choose_split(const std::vector<Vec3>& v, int a, int b, int c, int d) {
    const Vec3& pa = v[static_cast<std::size_t>(a)];
    const Vec3& pb = v[static_cast<std::size_t>(b)];
    const Vec3& pc = v[static_cast<std::size_t>(c)];
    const Vec3& pd = v[static_cast<std::size_t>(d)];
    const bool diag_ok = !triangle_degenerate(pa, pb, pc) && !triangle_degenerate(pa, pc, pd);
    const bool anti_ok = !triangle_degenerate(pa, pb, pd) && !triangle_degenerate(pb, pc, pd);
    if (!diag_ok && !anti_ok) return -1;
    const double diag_max = std::max(triangle_max_angle(pa, pb, pc), triangle_max_angle(pa, pc, pd));
    const double anti_max = std::max(triangle_max_angle(pa, pb, pd), triangle_max_angle(pb, pc, pd));
    return diag_ok && (!anti_ok || diag_max <= anti_max + 1e-12) ? 0 : 1;
}

void push_split(std::vector<std::array<int, 3>>& out, int split, int a, int b, int c, int d) {
    if (split == 0) {
        out.push_back({a, b, c});
        out.push_back({a, c, d});
    } else {
        out.push_back({a, b, d});
        out.push_back({b, c, d});
    }
}

}  // namespace

void TriMesh::finalize() {
    const std::size_t n = vertices.size();
    vertex_triangles.assign(n, {});
    vertex_neighbors.assign(n, {});
    edge_lengths.clear();
    edge_lengths.reserve(triangles.size());
    obtuse_triangles = 0;
    max_angle = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const auto v = static_cast<std::size_t>(tri[static_cast<std::size_t>(k)]);
            vertex_triangles[v].push_back(static_cast<int>(t));
            for (int l = 0; l < 3; ++l) {
                if (l != k) vertex_neighbors[v].push_back(tri[static_cast<std::size_t>(l)]);
            }
        }
        const Vec3& p0 = vertices[static_cast<std::size_t>(tri[0])];
        const Vec3& p1 = vertices[static_cast<std::size_t>(tri[1])];
        const Vec3& p2 = vertices[static_cast<std::size_t>(tri[2])];
        edge_lengths.push_back({distance(p1, p2), distance(p0, p2), distance(p0, p1)});
        const double angle = triangle_max_angle(p0, p1, p2);
        max_angle = std::max(max_angle, angle);
        if (angle > std::numbers::pi / 2 + kObtuseSlack) ++obtuse_triangles;
    }
    for (auto& nb : vertex_neighbors) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
}

TriMesh make_trimesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles) {
    TriMesh m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    for (const auto& t : m.triangles) {
        for (int v : t) {
            if (v < 0 || static_cast<std::size_t>(v) >= m.vertices.size()) {
                throw ConfigError("triangle references a vertex out of range");
            }
        }
    }
    m.refs.resize(m.vertices.size());
    m.finalize();
    return m;
}

TriMesh triangulate_complex(const SurfaceComplex& c) {
    const VertexIndex index(c);
    TriMesh m;
    m.vertices.reserve(index.size());
    m.refs.reserve(index.size());
    for (std::size_t v = 0; v < index.size(); ++v) {
        m.vertices.push_back(c.node(index.representative(static_cast<int>(v))).position);
        m.refs.push_back(index.members(static_cast<int>(v)));
    }

    for (const auto& s : c.sectors) {
        for (int i = 0; i < s.ni(); ++i) {
            for (int j = 0; j < s.nj(); ++j) {
                if (!s.quad_active(i, j)) continue;
                const int a = index.id({s.id(), i, j});
                const int b = index.id({s.id(), i + 1, j});
                const int cc = index.id({s.id(), i + 1, j + 1});
                const int d = index.id({s.id(), i, j + 1});
                const int split = choose_split(m.vertices, a, b, cc, d);
                if (split < 0) {
                    throw DegenerateQuadError("degenerate quad in triangulation at sector " + std::to_string(s.id()) +
                                              " quad (" + std::to_string(i) + "," + std::to_string(j) + ")");
                }
                push_split(m.triangles, split, a, b, cc, d);
            }
        }
    }
    m.finalize();
    return m;
}

TriMesh triangulate_quads(std::vector<Vec3> vertices, std::span<const std::array<int, 4>> quads) {
    TriMesh m;
    m.vertices = std::move(vertices);
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const auto& f = quads[q];
        for (int v : f) {
            if (v < 0 || static_cast<std::size_t>(v) >= m.vertices.size()) {
                throw ConfigError("quad " + std::to_string(q) + " references a vertex out of range");
            }
        }
        const int split = choose_split(m.vertices, f[0], f[1], f[2], f[3]);
        if (split < 0) throw DegenerateQuadError("degenerate quad " + std::to_string(q) + " in triangulation");
        push_split(m.triangles, split, f[0], f[1], f[2], f[3]);
    }
    m.refs.resize(m.vertices.size());
    m.finalize();
    return m;
}

UnfoldResult unfold_candidate(double dj, double dk, double dij, double dik, double djk) {
    const double edge_paths = std::min(dj + dij, dk + dik);
    if (!(djk > 0.0)) return {edge_paths, true};

    // 16 * area^2 of the planar triangles (o, r_k, r_j) and (r_i, r_k, r_j), in product form.
    const auto heron = [](double a, double b, double c) {
        return (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c);
    };
    const double scale_o = std::max({dj, dk, djk});
    const double scale_i = std::max({dij, dik, djk});
    double disc_o = heron(djk, dk, dj);
    double disc_i = heron(djk, dik, dij);
    constexpr double kSlack = 1e-12;
    if (disc_o < -kSlack * std::pow(scale_o, 4) || disc_i < -kSlack * std::pow(scale_i, 4)) {
        return {edge_paths, true};
    }
    disc_o = std::max(disc_o, 0.0);
    disc_i = std::max(disc_i, 0.0);

    const double xo = (dk * dk - dj * dj + djk * djk) / (2.0 * djk);
    const double yo = -std::sqrt(disc_o) / (2.0 * djk);
    const double xi = (dik * dik - dij * dij + djk * djk) / (2.0 * djk);
    const double yi = std::sqrt(disc_i) / (2.0 * djk);
    // The straight path from o to r_i must cross the edge between r_k and r_j; otherwise the
    // characteristic reaches r_i through a vertex and only the edge paths apply.
    const double rise = yi - yo;
    if (!(rise > 0.0)) return {edge_paths, false, true};
    const double cross_x = xo + (xi - xo) * (-yo / rise);
    if (cross_x < -1e-12 * djk || cross_x > djk * (1.0 + 1e-12)) return {edge_paths, false, true};
    const double through = std::hypot(xi - xo, yi - yo);
    return {std::min(through, edge_paths), false, false};
}

namespace {

enum class Label : unsigned char { Far, Considered, Accepted };

}  // namespace

FastMarchResult fast_march(const TriMesh& m, std::span<const Source> sources) {
    if (sources.empty()) throw ConfigError("fast_march needs at least one source");
    const std::size_t n = m.vertices.size();
    FastMarchResult out;
    out.distance.assign(n, kUnsetDistance);
    std::vector<Label> label(n, Label::Far);
    // Index of the source each value descends from; unfolding needs one common source.
    std::vector<int> origin(n, -1);

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

    for (const auto& s : sources) {
        if (s.vertex < 0 || static_cast<std::size_t>(s.vertex) >= n) throw ConfigError("source vertex out of range");
        if (!(s.distance >= 0.0)) throw ConfigError("source distance must be nonnegative");
        auto& d = out.distance[static_cast<std::size_t>(s.vertex)];
        if (s.distance < d) {
            d = s.distance;
            origin[static_cast<std::size_t>(s.vertex)] = static_cast<int>(&s - sources.data());
        }
    }
    for (const auto& s : sources) {
        const auto v = static_cast<std::size_t>(s.vertex);
        if (label[v] == Label::Accepted) continue;
        label[v] = Label::Accepted;
        out.acceptance_order.push_back(s.vertex);
    }

    const auto recompute = [&](int v) {
        const auto vi = static_cast<std::size_t>(v);
        double best = kUnsetDistance;
        int best_origin = -1;
        const auto offer = [&](double value, int from) {
            if (value < best) {
                best = value;
                best_origin = from;
            }
        };
        for (int t : m.vertex_triangles[vi]) {
            const auto& tri = m.triangles[static_cast<std::size_t>(t)];
            const auto& len = m.edge_lengths[static_cast<std::size_t>(t)];
            int corner = 0;
            while (tri[static_cast<std::size_t>(corner)] != v) ++corner;
            const int kc = (corner + 1) % 3;  // the other corners
            const int jc = (corner + 2) % 3;
            const int j = tri[static_cast<std::size_t>(jc)];
            const int k = tri[static_cast<std::size_t>(kc)];
            const bool j_acc = label[static_cast<std::size_t>(j)] == Label::Accepted;
            const bool k_acc = label[static_cast<std::size_t>(k)] == Label::Accepted;
            const double dij = len[static_cast<std::size_t>(kc)];  // opposite corner k
            const double dik = len[static_cast<std::size_t>(jc)];
            const double djk = len[static_cast<std::size_t>(corner)];
            const double dj = out.distance[static_cast<std::size_t>(j)];
            const double dk = out.distance[static_cast<std::size_t>(k)];
            const int oj = origin[static_cast<std::size_t>(j)];
            const int ok = origin[static_cast<std::size_t>(k)];
            if (j_acc) offer(dj + dij, oj);
            if (k_acc) offer(dk + dik, ok);
            if (!(j_acc && k_acc) || oj != ok) continue;

            const UnfoldResult r = unfold_candidate(dj, dk, dij, dik, djk);
            if (r.fallback) {
                ++out.fallback_updates;
                continue;
            }
            // A through-triangle value below max(Dj, Dk) means the characteristic does not
            // cross this triangle; the edge paths above already cover it.
            const double floor = std::max(dj, dk);
            if (r.value < floor - 1e-12 * std::max(1.0, floor)) continue;
            offer(std::max(r.value, floor), oj);
        }
        return std::pair{best, best_origin};
    };

    const auto relax_neighbors = [&](int v) {
        for (int w : m.vertex_neighbors[static_cast<std::size_t>(v)]) {
            const auto wi = static_cast<std::size_t>(w);
            if (label[wi] == Label::Accepted) continue;
            label[wi] = Label::Considered;
            const auto [d, from] = recompute(w);
            if (d < out.distance[wi]) {
                out.distance[wi] = d;
                origin[wi] = from;
                heap.emplace(d, w);
                ++out.heap_pushes;
            }
        }
    };

    for (int v : std::vector<int>(out.acceptance_order)) relax_neighbors(v);

    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        ++out.heap_pops;
        const auto vi = static_cast<std::size_t>(v);
        if (label[vi] == Label::Accepted || d != out.distance[vi]) continue;
        label[vi] = Label::Accepted;
        out.acceptance_order.push_back(v);
        relax_neighbors(v);
    }

    for (std::size_t v = 0; v < n; ++v) {
        if (label[v] != Label::Accepted) out.unreachable.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> dijkstra_bound(const TriMesh& m, std::span<const Source> sources) {
    const std::size_t n = m.vertices.size();
    std::vector<double> dist(n, kUnsetDistance);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (const auto& s : sources) {
        auto& d = dist[static_cast<std::size_t>(s.vertex)];
        if (s.distance < d) {
            d = s.distance;
            heap.emplace(d, s.vertex);
        }
    }
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        const auto vi = static_cast<std::size_t>(v);
        if (d != dist[vi]) continue;
        for (int w : m.vertex_neighbors[vi]) {
            const auto wi = static_cast<std::size_t>(w);
            const double cand = d + distance(m.vertices[vi], m.vertices[wi]);
            if (cand < dist[wi]) {
                dist[wi] = cand;
                heap.emplace(cand, w);
            }
        }
    }
    return dist;
}

TriMesh assign_geodesic_distance(SurfaceComplex& c) {
    TriMesh mesh = triangulate_complex(c);
    const VertexIndex index(c);
    const Source origin{index.id(c.origin), 0.0};
    const auto result = fast_march(mesh, std::span<const Source>(&origin, 1));
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        for (const auto& r : mesh.refs[v]) c.node(r).geo_dist = result.distance[v];
    }
    return mesh;
}

}  // namespace hypersurf
