#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "hypersurf/cli.hpp"
#include "hypersurf/config.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/lelieuvre.hpp"
#include "hypersurf/mesh_io.hpp"
#include "support.hpp"

using namespace hypersurf;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hypersurf_test_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(CliOptions opts) {
    std::ostringstream out, err;
    const int code = run(opts, out, err);
    return {code, out.str(), err.str()};
}

CliOptions options(const std::string& command, const fs::path& config, const fs::path& out) {
    CliOptions o;
    o.command = command;
    o.config = config.string();
    o.out = out.string();
    o.quiet = true;
    return o;
}

MeshBundle small_bundle(int size) {
    CurvatureSpec curv;
    MeshBundle b;
    b.complex = make_patched_complex(symmetric_angles(2), 0.5, 0.5, size, size, curv);
    for (auto& s : b.complex.sectors) s = sweep_sector_constant(s);
    return b;
}

}  // namespace

TEST(Config, Defaults) {
    const RunConfig c = parse_config(R"({"curvature": {"family": "linear", "epsilon": 8}})");
    EXPECT_EQ(c.curvature.family, CurvatureFamily::Linear);
    EXPECT_EQ(c.n, 2);
    EXPECT_EQ(c.I, 30);
    EXPECT_EQ(c.J, 30);
    EXPECT_EQ(c.tol, 1e-4);
    EXPECT_EQ(c.output.mesh, "mesh.obj");
    EXPECT_EQ(effective_schedule(c), (std::vector<double>{1.0, 2.0, 4.0, 8.0}));
    EXPECT_EQ(effective_angles(c).size(), 4u);
}

TEST(Config, FullDocument) {
    const RunConfig c = parse_config(R"({
      "curvature": {"family": "RING", "epsilon": 3, "schedule": [1, 3], "params": {"ring_radius": 0.4, "ring_gain": 10}},
      "sectors": {"n": 3},
      "grid": {"I": 12, "u_max": 0.7},
      "iteration": {"tol": 1e-6, "max_iters": 40},
      "surgery": [{"sector": 1, "b": 4, "m": 5, "spacing": 0.05, "size": 3}],
      "output": {"mesh": "a.obj", "csv": "a.csv", "report": "a.txt"}
    })");
    EXPECT_EQ(c.curvature.family, CurvatureFamily::Ring);
    EXPECT_EQ(c.curvature.ring_radius, 0.4);
    EXPECT_EQ(c.curvature.ring_gain, 10.0);
    EXPECT_EQ(c.J, 12);
    EXPECT_EQ(c.v_max, 0.7);
    EXPECT_EQ(c.max_iters, 40);
    ASSERT_EQ(c.surgery.size(), 1u);
    EXPECT_EQ(c.surgery[0].m, 5);
    EXPECT_EQ(c.surgery[0].spacing, 0.05);
    EXPECT_EQ(c.surgery[0].size, 3);
    EXPECT_EQ(iteration_config(c).epsilon_schedule, (std::vector<double>{1.0, 3.0}));
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_NE(config_error(R"({"surgery": [{"sector": 0, "b": 3, "m": 4}]})").find("surgery[0].m"), std::string::npos);
    EXPECT_NE(config_error(R"({"grid": {"I": 0}})").find("grid.I"), std::string::npos);
    EXPECT_NE(config_error(R"({"curvature": {"family": "cubic"}})").find("curvature.family"), std::string::npos);
    EXPECT_NE(config_error(R"({"curvature": {"epsilon": 4, "schedule": [1, 2]}})").find("curvature.schedule"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"grdi": {}})").find("grdi"), std::string::npos);
    EXPECT_NE(config_error("{").find("JSON"), std::string::npos);
}

TEST(Obj, SingleQuadPerSectorCounts) {
    MeshBundle b;
    CurvatureSpec curv;
    b.complex.sectors.push_back(
        sweep_sector_constant(init_boundary(SectorSpec::principal(std::numbers::pi / 2, 0.1, 0.1, 1, 1), curv)));
    const std::string obj = write_obj(b);
    std::istringstream in(obj);
    int v = 0, vn = 0, f = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("vn ", 0) == 0) ++vn;
        if (line.rfind("f ", 0) == 0) ++f;
    }
    EXPECT_EQ(v, 4);
    EXPECT_EQ(vn, 4);
    EXPECT_EQ(f, 1);
}

TEST(Obj, RoundTripIsByteIdentical) {
    const MeshBundle b = small_bundle(5);
    const std::string obj = write_obj(b);
    const std::string csv = write_csv(b.complex);
    const MeshBundle back = read_mesh(obj, csv);
    EXPECT_EQ(write_obj(back), obj);
    EXPECT_EQ(write_csv(back.complex), csv);
    EXPECT_EQ(back.complex.sectors.size(), 4u);
    EXPECT_EQ(back.complex.sectors[2].at(3, 4).normal, b.complex.sectors[2].at(3, 4).normal);
}

TEST(Obj, FaceCountAndCsvHeader) {
    const MeshBundle b = small_bundle(6);
    const TriMesh tri = parse_obj_trimesh(write_obj(b));
    EXPECT_EQ(tri.triangles.size(), 2u * 4u * 6u * 6u);
    const std::string csv = write_csv(b.complex);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "sector_id,i,j,vertex_index,x,y,z,nx,ny,nz,D,K,rho");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Obj, RejectsTamperedInput) {
    const MeshBundle b = small_bundle(3);
    const std::string obj = write_obj(b);
    const std::string csv = write_csv(b.complex);
    EXPECT_THROW(read_mesh("# something else\n" + obj, csv), ConfigError);
    EXPECT_THROW(read_mesh(obj, csv.substr(0, csv.size() / 2)), ConfigError);
    std::string bad = csv;
    bad.replace(bad.find("sector_id"), 9, "sector_ix");
    EXPECT_THROW(read_mesh(obj, bad), ConfigError);
}

TEST(Obj, GenericTrianglesAndQuads) {
    const TriMesh m = parse_obj_trimesh("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 2 0 0\nf 1 2 3 4\nf 2//2 5//5 3//3\n");
    EXPECT_EQ(m.vertices.size(), 5u);
    EXPECT_EQ(m.triangles.size(), 3u);
    EXPECT_THROW(parse_obj_trimesh("v 0 0 0\nf 1 2 3\n"), ConfigError);
}

TEST(Cli, GenerateFlatIsExactAndDeterministic) {
    const fs::path dir = scratch("flat");
    write_text(dir / "c.json", R"({"curvature": {"family": "linear", "epsilon": 0}, "grid": {"I": 10, "u_max": 0.6}})");
    const CliRun a = run_cli(options("generate", dir / "c.json", dir / "a"));
    ASSERT_EQ(a.code, 0) << a.err;
    const CliRun b = run_cli(options("generate", dir / "c.json", dir / "b"));
    ASSERT_EQ(b.code, 0) << b.err;
    for (const char* f : {"mesh.obj", "mesh.csv", "report.txt", "report.json"}) {
        EXPECT_EQ(read_text(dir / "a" / f), read_text(dir / "b" / f)) << f;
    }
    const auto j = nlohmann::json::parse(read_text(dir / "a" / "report.json"));
    EXPECT_EQ(j["sectors"], 4);
    EXPECT_EQ(j["quads"], 400);
    for (const auto& [name, value] : j["quad_residuals"].items()) EXPECT_LT(value.get<double>(), 1e-10) << name;
    EXPECT_TRUE(j["validation"]["ok"].get<bool>());

    CliOptions v = options("validate", dir / "c.json", dir / "a");
    EXPECT_EQ(run_cli(v).code, 0);
}

TEST(Cli, OverridesApply) {
    const fs::path dir = scratch("override");
    write_text(dir / "c.json", R"({"curvature": {"family": "linear", "epsilon": 1}, "grid": {"I": 8, "u_max": 0.5}})");
    CliOptions o = options("generate", dir / "c.json", dir);
    o.sectors = 3;
    o.grid = std::pair{6, 5};
    o.epsilon = 2.0;
    const RunConfig cfg = resolve_config(o);
    EXPECT_EQ(cfg.n, 3);
    EXPECT_EQ(cfg.I, 6);
    EXPECT_EQ(cfg.J, 5);
    EXPECT_EQ(cfg.curvature.epsilon, 2.0);
    ASSERT_EQ(run_cli(o).code, 0);
    const auto j = nlohmann::json::parse(read_text(dir / "report.json"));
    EXPECT_EQ(j["sectors"], 6);
    EXPECT_EQ(j["quads"], 6 * 6 * 5);
}

TEST(Cli, SurgeryFromPreviousRun) {
    const fs::path dir = scratch("surgery");
    write_text(dir / "c.json", R"({"curvature": {"family": "linear", "epsilon": 1}, "grid": {"I": 12, "u_max": 0.6},
                                   "surgery": [{"sector": 0, "b": 6, "m": 3}]})");
    ASSERT_EQ(run_cli(options("generate", dir / "c.json", dir / "base")).code, 0);
    CliOptions s = options("surgery", dir / "c.json", dir / "cut");
    s.from = (dir / "base").string();
    const CliRun r = run_cli(s);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(read_text(dir / "cut" / "report.json"));
    EXPECT_EQ(j["sectors"], 7);
    ASSERT_EQ(j["validation"]["branch_vertices"].size(), 1u);
    EXPECT_EQ(j["validation"]["branch_vertices"][0]["incident_quads"], 6);
    EXPECT_LT(j["quad_residuals"]["route"].get<double>(), 1e-10);
}

TEST(Cli, DistanceOnFlatGridIsEuclidean) {
    const fs::path dir = scratch("distance");
    const auto g = hypersurf::testing::flat_grid(8, 8, 1.0, 1.0);
    std::string obj;
    for (const Vec3& p : g.vertices) obj += "v " + format_double(p.x) + " " + format_double(p.y) + " 0\n";
    for (const auto& t : g.triangles) {
        obj += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
    }
    write_text(dir / "flat.obj", obj);
    CliOptions o;
    o.command = "distance";
    o.mesh = (dir / "flat.obj").string();
    o.out = dir.string();
    o.quiet = true;
    const CliRun r = run_cli(o);
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(read_text(dir / "distance.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "vertex_index,x,y,z,D");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double x, y, z, d;
        int v;
        char c;
        std::istringstream row(line);
        row >> v >> c >> x >> c >> y >> c >> z >> c >> d;
        EXPECT_NEAR(d, std::hypot(x, y), 1e-9) << line;
        ++rows;
    }
    EXPECT_EQ(rows, g.vertices.size());

    o.sources = {"1000"};
    EXPECT_EQ(run_cli(o).code, 1);
}

TEST(Cli, ExitCodesCarryLocation) {
    const fs::path dir = scratch("codes");
    write_text(dir / "bad.json", R"({"surgery": [{"sector": 0, "b": 3, "m": 4}]})");
    const CliRun bad = run_cli(options("generate", dir / "bad.json", dir));
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("surgery[0].m"), std::string::npos) << bad.err;

    EXPECT_EQ(run_cli(options("generate", dir / "missing.json", dir)).code, 1);

    write_text(dir / "num.json",
               R"({"curvature": {"family": "linear", "epsilon": 50, "schedule": [50]}, "grid": {"I": 30}})");
    const CliRun num = run_cli(options("generate", dir / "num.json", dir));
    EXPECT_EQ(num.code, 2);
    EXPECT_NE(num.err.find("stage 0"), std::string::npos) << num.err;
    EXPECT_NE(num.err.find("node ("), std::string::npos) << num.err;
}

#ifdef HYPERSURF_CLI
TEST(Cli, BinaryExitCodes) {
    const fs::path dir = scratch("binary");
    write_text(dir / "c.json", R"({"curvature": {"family": "constant"}, "grid": {"I": 4, "u_max": 0.4}})");
    const auto status = [&](const std::string& args) {
        const std::string cmd = std::string(HYPERSURF_CLI) + " " + args + " > /dev/null 2>&1";
        const int s = std::system(cmd.c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("generate --config " + (dir / "c.json").string() + " --out " + dir.string() + " --quiet"), 0);
    EXPECT_TRUE(fs::exists(dir / "mesh.obj"));
    EXPECT_EQ(status("generate --out " + dir.string()), 1);
    EXPECT_EQ(status("generate --config " + (dir / "c.json").string() + " --grid 4"), 1);
    EXPECT_EQ(status("frobnicate"), 1);
}
#endif
