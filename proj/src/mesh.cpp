#include "hypersurf/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

#include "hypersurf/errors.hpp"

namespace hypersurf {

SectorGrid::SectorGrid(int id, int ni, int nj, Parity parity)
    : id_(id), ni_(ni), nj_(nj), parity_(parity) {
    if (ni < 1 || nj < 1) {
        throw ConfigError("sector grid needs at least one quad in each direction");
    }
    nodes_.resize(static_cast<std::size_t>(ni + 1) * static_cast<std::size_t>(nj + 1));
}

void SectorGrid::set_cut(int b) {
    if (b < 1 || b >= std::min(ni_, nj_)) {
        throw ConfigError("cut index must satisfy 1 <= b < min(I, J)");
    }
    cut_ = b;
}

std::array<std::array<int, 2>, 4> quad_corner_indices(Parity parity, int i, int j) {
    if (parity == Parity::Odd) {
        return {{{i, j}, {i + 1, j}, {i, j + 1}, {i + 1, j + 1}}};
    }
    return {{{i, j}, {i, j + 1}, {i + 1, j}, {i + 1, j + 1}}};
}

std::array<VertexState, 4> quad_corners(const SectorGrid& s, int i, int j) {
    if (i < 0 || j < 0 || i >= s.ni() || j >= s.nj()) {
        throw std::out_of_range("quad index (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside sector " + std::to_string(s.id()));
    }
    const auto idx = quad_corner_indices(s.parity(), i, j);
    return {s.at(idx[0][0], idx[0][1]), s.at(idx[1][0], idx[1][1]), s.at(idx[2][0], idx[2][1]),
            s.at(idx[3][0], idx[3][1])};
}

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Keep the smaller slot as root so ids follow storage order.
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

VertexIndex::VertexIndex(const SurfaceComplex& c) {
    std::size_t total = 0;
    for (const auto& s : c.sectors) {
        offsets_.push_back(total);
        nj1_.push_back(s.nj() + 1);
        total += s.node_count();
    }
    const auto slot = [&](const NodeRef& r) {
        return offsets_[static_cast<std::size_t>(r.sector)] +
               static_cast<std::size_t>(r.i) * static_cast<std::size_t>(nj1_[static_cast<std::size_t>(r.sector)]) +
               static_cast<std::size_t>(r.j);
    };

    UnionFind uf(total);
    for (const auto& g : c.gluings) {
        for (int t = 0; t < g.count; ++t) {
            const NodeRef a = g.side_a.at(t);
            const NodeRef b = g.side_b.at(t);
            if (!c.sectors.at(a.sector).node_active(a.i, a.j) || !c.sectors.at(b.sector).node_active(b.i, b.j)) {
                throw ConfigError("gluing references an inactive or out-of-range node");
            }
            uf.unite(slot(a), slot(b));
        }
    }

    ids_.assign(total, -1);
    std::vector<int> root_id(total, -1);
    for (const auto& s : c.sectors) {
        for (int i = 0; i <= s.ni(); ++i) {
            for (int j = 0; j <= s.nj(); ++j) {
                if (!s.node_active(i, j)) continue;
                const NodeRef r{s.id(), i, j};
                const std::size_t k = slot(r);
                const std::size_t root = uf.find(k);
                if (root_id[root] < 0) {
                    root_id[root] = static_cast<int>(representatives_.size());
                    representatives_.push_back(r);
                    members_.emplace_back();
                }
                ids_[k] = root_id[root];
                members_[static_cast<std::size_t>(root_id[root])].push_back(r);
            }
        }
    }
}

int VertexIndex::id(const NodeRef& r) const {
    const auto s = static_cast<std::size_t>(r.sector);
    return ids_[offsets_[s] + static_cast<std::size_t>(r.i) * static_cast<std::size_t>(nj1_[s]) +
                static_cast<std::size_t>(r.j)];
}

namespace {

struct QuadRecord {
    std::array<int, 4> v;  // (i,j), (i+1,j), (i+1,j+1), (i,j+1)
    EdgeLabel along_i;
};

std::vector<QuadRecord> collect_quads(const SurfaceComplex& c, const VertexIndex& index) {
    std::vector<QuadRecord> quads;
    for (const auto& s : c.sectors) {
        for (int i = 0; i < s.ni(); ++i) {
            for (int j = 0; j < s.nj(); ++j) {
                if (!s.quad_active(i, j)) continue;
                quads.push_back({{index.id({s.id(), i, j}), index.id({s.id(), i + 1, j}),
                                  index.id({s.id(), i + 1, j + 1}), index.id({s.id(), i, j + 1})},
                                 s.label_along_i()});
            }
        }
    }
    return quads;
}

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

ValidationReport validate_complex(const SurfaceComplex& c, double gluing_tolerance) {
    ValidationReport report;

    for (const auto& g : c.gluings) {
        for (int t = 0; t < g.count; ++t) {
            const auto& a = c.node(g.side_a.at(t));
            const auto& b = c.node(g.side_b.at(t));
            report.max_gluing_position_gap = std::max(report.max_gluing_position_gap, distance(a.position, b.position));
            report.max_gluing_normal_gap = std::max(report.max_gluing_normal_gap, distance(a.normal, b.normal));
        }
    }
    if (!(report.max_gluing_position_gap < gluing_tolerance) || !(report.max_gluing_normal_gap < gluing_tolerance)) {
        report.gluings_coincide = false;
        report.failures.push_back("glued nodes do not coincide (position gap " +
                                  std::to_string(report.max_gluing_position_gap) + ", normal gap " +
                                  std::to_string(report.max_gluing_normal_gap) + ")");
    }

    const VertexIndex index(c);
    const auto quads = collect_quads(c, index);

    // Edge -> incident quads, and the label each quad assigns to it.
    std::map<EdgeKey, std::vector<std::size_t>> edge_quads;
    std::map<EdgeKey, EdgeLabel> edge_label;
    for (std::size_t q = 0; q < quads.size(); ++q) {
        const auto& v = quads[q].v;
        const EdgeLabel li = quads[q].along_i;
        const EdgeLabel lj = li == EdgeLabel::U ? EdgeLabel::V : EdgeLabel::U;
        const std::array<std::pair<EdgeKey, EdgeLabel>, 4> edges{{{edge_key(v[0], v[1]), li},
                                                                  {edge_key(v[3], v[2]), li},
                                                                  {edge_key(v[0], v[3]), lj},
                                                                  {edge_key(v[1], v[2]), lj}}};
        for (const auto& [key, label] : edges) {
            if (key.first == key.second) {
                report.manifold_edges = false;
                report.failures.push_back("quad with collapsed edge");
                continue;
            }
            edge_quads[key].push_back(q);
            const auto [it, inserted] = edge_label.emplace(key, label);
            if (!inserted && it->second != label && report.edge_labels_consistent) {
                report.edge_labels_consistent = false;
                report.failures.push_back("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                                          ") labelled both u and v");
            }
        }
    }

    std::vector<std::vector<std::size_t>> adjacency(quads.size());
    std::vector<int> vertex_quads(index.size(), 0);
    std::vector<char> vertex_on_boundary(index.size(), 0);
    for (const auto& q : quads) {
        for (int v : q.v) ++vertex_quads[static_cast<std::size_t>(v)];
    }
    for (const auto& [key, qs] : edge_quads) {
        if (qs.size() > 2) {
            if (report.manifold_edges) report.failures.push_back("edge shared by more than two quads");
            report.manifold_edges = false;
        }
        if (qs.size() == 1) {
            vertex_on_boundary[static_cast<std::size_t>(key.first)] = 1;
            vertex_on_boundary[static_cast<std::size_t>(key.second)] = 1;
        }
        for (std::size_t a = 0; a < qs.size(); ++a) {
            for (std::size_t b = a + 1; b < qs.size(); ++b) {
                adjacency[qs[a]].push_back(qs[b]);
                adjacency[qs[b]].push_back(qs[a]);
            }
        }
    }

    std::vector<int> color(quads.size(), -1);
    for (std::size_t start = 0; start < quads.size() && report.two_colorable; ++start) {
        if (color[start] >= 0) continue;
        color[start] = 0;
        std::queue<std::size_t> queue;
        queue.push(start);
        while (!queue.empty() && report.two_colorable) {
            const std::size_t q = queue.front();
            queue.pop();
            for (std::size_t n : adjacency[q]) {
                if (color[n] < 0) {
                    color[n] = 1 - color[q];
                    queue.push(n);
                } else if (color[n] == color[q]) {
                    report.two_colorable = false;
                    report.failures.push_back("quad graph is not 2-colorable");
                    break;
                }
            }
        }
    }

    for (std::size_t v = 0; v < index.size(); ++v) {
        if (!vertex_on_boundary[v] && vertex_quads[v] != 4) {
            report.branch_vertices.push_back({index.representative(static_cast<int>(v)), vertex_quads[v]});
        }
    }
    return report;
}

int quad_incidence(const SurfaceComplex& c, const NodeRef& r) {
    const VertexIndex index(c);
    const int target = index.id(r);
    if (target < 0) throw ConfigError("node is not active");
    int count = 0;
    for (const auto& q : collect_quads(c, index)) {
        count += static_cast<int>(std::count(q.v.begin(), q.v.end(), target));
    }
    return count;
}

}  // namespace hypersurf
