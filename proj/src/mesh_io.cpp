#include "hypersurf/mesh_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "hypersurf/errors.hpp"

namespace hypersurf {

namespace {

constexpr const char* kMagic = "# hypersurf-mesh 1";
constexpr const char* kCsvHeader = "sector_id,i,j,vertex_index,x,y,z,nx,ny,nz,D,K,rho";

const char* parity_name(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

std::string ref_text(const NodeRef& r) {
    return std::to_string(r.sector) + " " + std::to_string(r.i) + " " + std::to_string(r.j);
}

std::string run_text(const BoundaryRun& r) {
    return ref_text(r.start) + " " + std::to_string(r.di) + " " + std::to_string(r.dj);
}

std::string vec_text(const Vec3& v) {
    return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
}

void write_boundary(std::ostringstream& out, int id, const char* axis, const BoundarySource& src) {
    out << "# boundary " << id << " " << axis << " ";
    if (const auto* ray = std::get_if<RayBoundary>(&src)) {
        out << "ray " << vec_text(ray->direction) << " " << format_double(ray->spacing);
        if (ray->split) out << " split " << ray->split->host << " " << ray->split->b << " " << format_double(ray->split->angle);
    } else {
        out << "inherit " << run_text(std::get<InheritedBoundary>(src).source);
    }
    out << "\n";
}

/// Faces keep the (i,j) -> (i+1,j) -> (i+1,j+1) -> (i,j+1) cycle unless that winds against the
/// normals, as it does for sectors appended by surgery on an Even host.
bool reversed_winding(const SectorGrid& s) {
    if (s.ni() < 1 || s.nj() < 1) return false;
    const Vec3& r = s.at(0, 0).position;
    return dot(cross(s.at(1, 0).position - r, s.at(0, 1).position - r), s.at(0, 0).normal) < 0.0;
}

class Tokens {
public:
    Tokens(const std::string& line, int lineno) : in_(line), lineno_(lineno) {}

    std::string word() {
        std::string w;
        if (!(in_ >> w)) error("unexpected end of line");
        return w;
    }
    bool more() {
        in_ >> std::ws;
        return !in_.eof();
    }
    int integer() {
        const std::string w = word();
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(w.c_str(), &end, 10);
        if (errno != 0 || end == w.c_str() || *end != '\0') error("expected an integer, got '" + w + "'");
        return static_cast<int>(v);
    }
    double number() {
        const std::string w = word();
        return parse_number(w);
    }
    Vec3 vec() {
        const double x = number();
        const double y = number();
        const double z = number();
        return {x, y, z};
    }
    NodeRef ref() {
        const int s = integer();
        const int i = integer();
        const int j = integer();
        return {s, i, j};
    }
    BoundaryRun run() {
        const NodeRef start = ref();
        const int di = integer();
        const int dj = integer();
        return {start, di, dj};
    }
    double parse_number(const std::string& w) const {
        char* end = nullptr;
        const double v = std::strtod(w.c_str(), &end);
        if (end == w.c_str() || *end != '\0') error("expected a number, got '" + w + "'");
        return v;
    }
    [[noreturn]] void error(const std::string& msg) const {
        throw ConfigError("line " + std::to_string(lineno_) + ": " + msg);
    }

private:
    std::istringstream in_;
    int lineno_;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void check_ref(const SurfaceComplex& c, const NodeRef& r, const std::string& what) {
    if (r.sector < 0 || static_cast<std::size_t>(r.sector) >= c.sectors.size() ||
        !c.sectors[static_cast<std::size_t>(r.sector)].in_range(r.i, r.j)) {
        throw ConfigError(what + " refers to a node outside the complex: " + ref_text(r));
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string write_obj(const MeshBundle& bundle) {
    const SurfaceComplex& c = bundle.complex;
    const VertexIndex index(c);
    std::ostringstream out;
    out << kMagic << "\n";
    out << "# sectors " << c.sectors.size() << "\n";
    for (const auto& s : c.sectors) {
        out << "# sector " << s.id() << " " << s.ni() << " " << s.nj() << " " << parity_name(s.parity()) << " "
            << (s.cut() ? *s.cut() : -1) << "\n";
        out << "# corner " << s.id() << " " << (s.boundary.corner ? ref_text(*s.boundary.corner) : "origin") << "\n";
        write_boundary(out, s.id(), "i", s.boundary.along_i);
        write_boundary(out, s.id(), "j", s.boundary.along_j);
    }
    out << "# origin " << ref_text(c.origin) << "\n";
    for (const auto& g : c.gluings) {
        out << "# gluing " << run_text(g.side_a) << " " << run_text(g.side_b) << " " << g.count << " " << vec_text(g.ray)
            << "\n";
    }
    for (const auto& b : c.branch_points) out << "# branch " << ref_text(b.vertex) << " " << b.incident_quads << "\n";
    for (const auto& r : c.surgeries) {
        out << "# surgery " << r.host << " " << r.b << " " << r.m << " " << format_double(r.theta) << " "
            << format_double(r.spacing) << " " << r.new_sectors.size();
        for (int id : r.new_sectors) out << " " << id;
        out << "\n";
    }
    for (const auto& st : bundle.stages) {
        out << "# stage " << format_double(st.epsilon) << " " << st.iterations << " " << st.change_history.size();
        for (double x : st.change_history) out << " " << format_double(x);
        out << "\n";
    }

    for (std::size_t v = 0; v < index.size(); ++v) {
        out << "v " << vec_text(c.node(index.representative(static_cast<int>(v))).position) << "\n";
    }
    for (std::size_t v = 0; v < index.size(); ++v) {
        out << "vn " << vec_text(c.node(index.representative(static_cast<int>(v))).normal) << "\n";
    }
    for (const auto& s : c.sectors) {
        out << "g sector_" << s.id() << "\n";
        const bool flip = reversed_winding(s);
        for (int i = 0; i < s.ni(); ++i) {
            for (int j = 0; j < s.nj(); ++j) {
                if (!s.quad_active(i, j)) continue;
                std::array<int, 4> f{index.id({s.id(), i, j}) + 1, index.id({s.id(), i + 1, j}) + 1,
                                     index.id({s.id(), i + 1, j + 1}) + 1, index.id({s.id(), i, j + 1}) + 1};
                if (flip) std::swap(f[1], f[3]);
                out << "f";
                for (int k : f) out << " " << k << "//" << k;
                out << "\n";
            }
        }
    }
    return out.str();
}

std::string write_csv(const SurfaceComplex& c) {
    const VertexIndex index(c);
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& s : c.sectors) {
        for (int i = 0; i <= s.ni(); ++i) {
            for (int j = 0; j <= s.nj(); ++j) {
                if (!s.node_active(i, j)) continue;
                const VertexState& v = s.at(i, j);
                out << s.id() << "," << i << "," << j << "," << index.id({s.id(), i, j}) << ","
                    << format_double(v.position.x) << "," << format_double(v.position.y) << ","
                    << format_double(v.position.z) << "," << format_double(v.normal.x) << ","
                    << format_double(v.normal.y) << "," << format_double(v.normal.z) << ","
                    << format_double(v.geo_dist) << "," << format_double(-1.0 / (v.rho * v.rho)) << ","
                    << format_double(v.rho) << "\n";
            }
        }
    }
    return out.str();
}

MeshBundle read_mesh(const std::string& obj_text, const std::string& csv_text) {
    MeshBundle bundle;
    SurfaceComplex& c = bundle.complex;
    std::vector<Vec3> positions;
    std::size_t normals = 0;
    std::size_t faces = 0;
    std::size_t declared = 0;
    bool magic = false;

    std::istringstream obj(obj_text);
    std::string line;
    int lineno = 0;
    while (std::getline(obj, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != kMagic) throw ConfigError("line 1: not a hypersurf mesh (missing '" + std::string(kMagic) + "')");
            magic = true;
            continue;
        }
        Tokens t(line, lineno);
        const std::string head = t.word();
        if (head == "v") {
            positions.push_back(t.vec());
        } else if (head == "vn") {
            ++normals;
        } else if (head == "f") {
            ++faces;
        } else if (head == "g") {
        } else if (head == "#") {
            if (!t.more()) continue;
            const std::string key = t.word();
            if (key == "sectors") {
                declared = static_cast<std::size_t>(t.integer());
            } else if (key == "sector") {
                const int id = t.integer();
                const int ni = t.integer();
                const int nj = t.integer();
                const std::string par = t.word();
                const int cut = t.integer();
                if (id != static_cast<int>(c.sectors.size())) t.error("sectors must be listed in id order");
                if (ni < 1 || nj < 1) t.error("sector dimensions must be positive");
                if (par != "odd" && par != "even") t.error("parity must be odd or even");
                SectorGrid s(id, ni, nj, par == "odd" ? Parity::Odd : Parity::Even);
                if (cut >= 0) s.set_cut(cut);
                c.sectors.push_back(std::move(s));
            } else if (key == "corner" || key == "boundary") {
                const int id = t.integer();
                if (id < 0 || static_cast<std::size_t>(id) >= c.sectors.size()) t.error("unknown sector " + std::to_string(id));
                SectorBoundary& b = c.sectors[static_cast<std::size_t>(id)].boundary;
                if (key == "corner") {
                    const std::string w = t.word();
                    if (w == "origin") {
                        b.corner.reset();
                    } else {
                        const int s = static_cast<int>(t.parse_number(w));
                        const int i = t.integer();
                        const int j = t.integer();
                        b.corner = NodeRef{s, i, j};
                    }
                } else {
                    const std::string axis = t.word();
                    if (axis != "i" && axis != "j") t.error("boundary axis must be i or j");
                    BoundarySource src;
                    const std::string kind = t.word();
                    if (kind == "ray") {
                        RayBoundary ray;
                        ray.direction = t.vec();
                        ray.spacing = t.number();
                        if (t.more()) {
                            if (t.word() != "split") t.error("expected 'split'");
                            SplitAxis sa;
                            sa.host = t.integer();
                            sa.b = t.integer();
                            sa.angle = t.number();
                            ray.split = sa;
                        }
                        src = ray;
                    } else if (kind == "inherit") {
                        src = InheritedBoundary{t.run()};
                    } else {
                        t.error("boundary kind must be ray or inherit");
                    }
                    (axis == "i" ? b.along_i : b.along_j) = src;
                }
            } else if (key == "origin") {
                c.origin = t.ref();
            } else if (key == "gluing") {
                GluingMap g;
                g.side_a = t.run();
                g.side_b = t.run();
                g.count = t.integer();
                g.ray = t.vec();
                c.gluings.push_back(g);
            } else if (key == "branch") {
                BranchPoint bp;
                bp.vertex = t.ref();
                bp.incident_quads = t.integer();
                c.branch_points.push_back(bp);
            } else if (key == "surgery") {
                SurgeryRecord r;
                r.host = t.integer();
                r.b = t.integer();
                r.m = t.integer();
                r.theta = t.number();
                r.spacing = t.number();
                const int k = t.integer();
                for (int q = 0; q < k; ++q) r.new_sectors.push_back(t.integer());
                c.surgeries.push_back(r);
            } else if (key == "stage") {
                StageStats st;
                st.epsilon = t.number();
                st.iterations = t.integer();
                const int k = t.integer();
                for (int q = 0; q < k; ++q) st.change_history.push_back(t.number());
                bundle.stages.push_back(st);
            }
        } else {
            t.error("unsupported OBJ record '" + head + "'");
        }
    }
    if (!magic) throw ConfigError("empty mesh file");
    if (declared != c.sectors.size()) throw ConfigError("sector count does not match the 'sectors' header");
    check_ref(c, c.origin, "origin");
    for (const auto& g : c.gluings) {
        if (g.count < 1) throw ConfigError("gluing with nonpositive count");
        for (const BoundaryRun* r : {&g.side_a, &g.side_b}) {
            check_ref(c, r->start, "gluing");
            check_ref(c, r->at(g.count - 1), "gluing");
        }
    }

    const VertexIndex index(c);
    if (positions.size() != index.size() || normals != index.size()) {
        throw ConfigError("vertex count " + std::to_string(positions.size()) + " does not match the structure (" +
                          std::to_string(index.size()) + ")");
    }

    std::map<NodeRef, bool> seen;
    std::istringstream csv(csv_text);
    if (!std::getline(csv, line) || line != kCsvHeader) throw ConfigError("csv: header must be '" + std::string(kCsvHeader) + "'");
    lineno = 1;
    while (std::getline(csv, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        Tokens t("", lineno);
        if (cells.size() != 13) t.error("csv: expected 13 columns");
        const auto integer = [&](const std::string& s) {
            const double v = t.parse_number(s);
            if (v != static_cast<double>(static_cast<int>(v))) t.error("csv: expected an integer");
            return static_cast<int>(v);
        };
        const NodeRef r{integer(cells[0]), integer(cells[1]), integer(cells[2])};
        check_ref(c, r, "csv line " + std::to_string(lineno));
        if (!c.sectors[static_cast<std::size_t>(r.sector)].node_active(r.i, r.j)) t.error("csv: node inside a cut region");
        if (seen[r]) t.error("csv: duplicate node " + ref_text(r));
        seen[r] = true;
        const int vid = integer(cells[3]);
        if (vid != index.id(r)) t.error("csv: vertex_index disagrees with the gluing structure");
        VertexState& v = c.node(r);
        v.position = {t.parse_number(cells[4]), t.parse_number(cells[5]), t.parse_number(cells[6])};
        v.normal = {t.parse_number(cells[7]), t.parse_number(cells[8]), t.parse_number(cells[9])};
        v.geo_dist = t.parse_number(cells[10]);
        v.rho = t.parse_number(cells[12]);
        if (index.representative(vid) == r && !(v.position == positions[static_cast<std::size_t>(vid)])) {
            t.error("csv: position differs from OBJ vertex " + std::to_string(vid + 1));
        }
    }
    std::size_t active = 0;
    std::size_t quads = 0;
    for (const auto& s : c.sectors) {
        for (int i = 0; i <= s.ni(); ++i) {
            for (int j = 0; j <= s.nj(); ++j) {
                if (s.node_active(i, j)) ++active;
                if (s.quad_active(i, j)) ++quads;
            }
        }
    }
    if (seen.size() != active) throw ConfigError("csv: " + std::to_string(active - seen.size()) + " active nodes missing");
    if (faces != quads) throw ConfigError("face count does not match the structure");
    return bundle;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw ConfigError("cannot write " + path.string());
}

void export_mesh(const MeshBundle& bundle, const std::filesystem::path& obj_path, const std::filesystem::path& csv_path) {
    write_text(obj_path, write_obj(bundle));
    write_text(csv_path, write_csv(bundle.complex));
}

MeshBundle import_mesh(const std::filesystem::path& obj_path, const std::filesystem::path& csv_path) {
    return read_mesh(read_text(obj_path), read_text(csv_path));
}

TriMesh parse_obj_trimesh(const std::string& text) {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> quads;
    std::vector<std::array<int, 3>> triangles;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        Tokens t(line, lineno);
        if (!t.more()) continue;
        const std::string head = t.word();
        if (head == "v") {
            vertices.push_back(t.vec());
        } else if (head == "f") {
            std::vector<int> ids;
            while (t.more()) {
                const std::string w = t.word();
                const int k = static_cast<int>(t.parse_number(w.substr(0, w.find('/'))));
                const int n = static_cast<int>(vertices.size());
                if (k == 0 || k > n || k < -n) t.error("face index out of range");
                ids.push_back(k > 0 ? k - 1 : n + k);
            }
            if (ids.size() == 3) {
                triangles.push_back({ids[0], ids[1], ids[2]});
            } else if (ids.size() == 4) {
                quads.push_back({ids[0], ids[1], ids[2], ids[3]});
            } else {
                t.error("only triangle and quad faces are supported");
            }
        }
    }
    TriMesh m = triangulate_quads(std::move(vertices), quads);
    if (!triangles.empty()) {
        m.triangles.insert(m.triangles.end(), triangles.begin(), triangles.end());
        m.finalize();
    }
    return m;
}

TriMesh load_obj_trimesh(const std::filesystem::path& path) { return parse_obj_trimesh(read_text(path)); }

}  // namespace hypersurf
