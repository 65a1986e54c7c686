#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypersurf/amsler.hpp"
#include "hypersurf/cli.hpp"
#include "hypersurf/config.hpp"
#include "hypersurf/diagnostics.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/geodesic.hpp"
#include "hypersurf/lelieuvre.hpp"
#include "hypersurf/mesh_io.hpp"

namespace py = pybind11;
using namespace hypersurf;

namespace {

using Triple = std::array<double, 3>;

Vec3 vec(const Triple& a) { return {a[0], a[1], a[2]}; }
Triple tup(const Vec3& v) { return {v.x, v.y, v.z}; }

CurvatureFamily family_from(const std::string& name) {
    std::string s;
    for (char ch : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (s == "constant") return CurvatureFamily::Constant;
    if (s == "linear") return CurvatureFamily::Linear;
    if (s == "ring") return CurvatureFamily::Ring;
    throw ConfigError("unknown curvature family '" + name + "'");
}

py::dict quad_update(const Triple& r0, const Triple& r1, const Triple& r2, const Triple& n0, const Triple& n1,
                     const Triple& n2, const std::array<double, 4>& rho, bool constant) {
    QuadSolveInputs in;
    in.r0 = vec(r0);
    in.r1 = vec(r1);
    in.r2 = vec(r2);
    in.n0 = vec(n0);
    in.n1 = vec(n1);
    in.n2 = vec(n2);
    in.rho0 = rho[0];
    in.rho1 = rho[1];
    in.rho2 = rho[2];
    in.rho12 = rho[3];
    const QuadSolveOutputs out = constant ? quad_update_constant(in) : quad_update_variable(in);
    py::dict d;
    d["n12"] = tup(out.n12);
    d["r12"] = tup(out.r12);
    d["c"] = out.c;
    d["alpha"] = out.alpha;
    d["degenerate_branch"] = out.degenerate_branch;
    return d;
}

std::vector<double> march(const std::vector<Triple>& vertices, const std::vector<std::array<int, 3>>& triangles,
                          const std::vector<std::pair<int, double>>& sources) {
    std::vector<Vec3> pts;
    pts.reserve(vertices.size());
    for (const auto& p : vertices) pts.push_back(vec(p));
    const TriMesh m = make_trimesh(std::move(pts), triangles);
    std::vector<Source> src;
    for (const auto& [v, d] : sources) src.push_back({v, d});
    return fast_march(m, src).distance;
}

/// Generated or loaded mesh together with its convergence history.
struct Mesh {
    MeshBundle bundle;

    std::string obj() const { return write_obj(bundle); }
    std::string csv() const { return write_csv(bundle.complex); }
    std::string report() const { return report_json(compute_diagnostics(bundle.complex, bundle.stages)); }
    std::string report_text() const { return format_report(compute_diagnostics(bundle.complex, bundle.stages)); }
    bool valid() const { return validate_complex(bundle.complex).ok(); }
    int sectors() const { return static_cast<int>(bundle.complex.sectors.size()); }

    py::tuple triangles() const {
        const TriMesh t = triangulate_complex(bundle.complex);
        std::vector<Triple> v;
        for (const Vec3& p : t.vertices) v.push_back(tup(p));
        return py::make_tuple(v, t.triangles);
    }

    void save(const std::string& obj_path, const std::string& csv_path) const {
        export_mesh(bundle, obj_path, csv_path);
    }
};

Mesh generate_from(const std::string& config_json) { return {generate(parse_config(config_json))}; }

Mesh surgery_on(const Mesh& m, const std::string& config_json) {
    const RunConfig cfg = parse_config(config_json);
    if (cfg.surgery.empty()) throw ConfigError("surgery: config has no surgery entries");
    return {apply_surgeries(m.bundle, cfg)};
}

Mesh load(const std::string& obj_path, const std::string& csv_path) { return {import_mesh(obj_path, csv_path)}; }

Mesh parse(const std::string& obj_text, const std::string& csv_text) { return {read_mesh(obj_text, csv_text)}; }

py::tuple run_command(const std::string& command, std::optional<std::string> config, const std::string& out,
                      std::optional<double> tol, std::optional<double> epsilon, std::optional<int> sectors,
                      std::optional<std::pair<int, int>> grid, std::optional<std::string> from,
                      std::optional<std::string> mesh, std::vector<std::string> sources) {
    CliOptions o;
    o.command = command;
    o.config = std::move(config);
    o.out = out;
    o.tol = tol;
    o.epsilon = epsilon;
    o.sectors = sectors;
    o.grid = grid;
    o.quiet = true;
    o.from = std::move(from);
    o.mesh = std::move(mesh);
    o.sources = std::move(sources);
    std::ostringstream log, err;
    const int code = run(o, log, err);
    return py::make_tuple(code, err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Discrete asymptotic surfaces with prescribed negative curvature";

    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const NumericalError& e) {
            py::set_error(numerical_error, e.what());
        }
    });

    m.def("quad_update", &quad_update, py::arg("r0"), py::arg("r1"), py::arg("r2"), py::arg("n0"), py::arg("n1"),
          py::arg("n2"), py::arg("rho") = std::array<double, 4>{1.0, 1.0, 1.0, 1.0}, py::arg("constant") = false,
          "Closes one quad from three corners; returns n12, r12, c, alpha and degenerate_branch.");

    m.def(
        "eval_curvature",
        [](const std::string& family, double epsilon, double d, double ring_radius, double ring_gain) {
            CurvatureSpec c;
            c.family = family_from(family);
            c.epsilon = epsilon;
            c.ring_radius = ring_radius;
            c.ring_gain = ring_gain;
            return eval_curvature(c, d);
        },
        py::arg("family"), py::arg("epsilon"), py::arg("d"), py::arg("ring_radius") = 0.5,
        py::arg("ring_gain") = 20.0);

    m.def("geometric_schedule", &geometric_schedule, py::arg("target"));

    m.def(
        "unfold_candidate",
        [](double dj, double dk, double dij, double dik, double djk) {
            const UnfoldResult r = unfold_candidate(dj, dk, dij, dik, djk);
            return py::make_tuple(r.value, r.fallback, r.outside);
        },
        py::arg("dj"), py::arg("dk"), py::arg("dij"), py::arg("dik"), py::arg("djk"),
        "Distance at i from j, k by unfolding; returns (value, fallback, outside).");

    m.def("fast_march", &march, py::arg("vertices"), py::arg("triangles"),
          py::arg("sources") = std::vector<std::pair<int, double>>{{0, 0.0}},
          "Geodesic distance on a triangle mesh from (vertex, start distance) sources.");

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("sectors", &Mesh::sectors)
        .def("obj", &Mesh::obj)
        .def("csv", &Mesh::csv)
        .def("report", &Mesh::report, "Diagnostics as JSON text.")
        .def("report_text", &Mesh::report_text)
        .def("valid", &Mesh::valid)
        .def("triangles", &Mesh::triangles, "(vertices, triangles) of the triangulated complex.")
        .def("save", &Mesh::save, py::arg("obj_path"), py::arg("csv_path"));

    m.def("generate", &generate_from, py::arg("config_json"));
    m.def("surgery", &surgery_on, py::arg("mesh"), py::arg("config_json"));
    m.def("load", &load, py::arg("obj_path"), py::arg("csv_path"));
    m.def("parse", &parse, py::arg("obj_text"), py::arg("csv_text"));

    m.def("run", &run_command, py::arg("command"), py::arg("config") = py::none(), py::arg("out") = ".",
          py::arg("tol") = py::none(), py::arg("epsilon") = py::none(), py::arg("sectors") = py::none(),
          py::arg("grid") = py::none(), py::arg("from_dir") = py::none(), py::arg("mesh") = py::none(),
          py::arg("sources") = std::vector<std::string>{},
          "Runs a CLI subcommand quietly; returns (exit_code, error_text).");
}
