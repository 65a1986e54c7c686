#include "hypersurf/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hypersurf/diagnostics.hpp"
#include "hypersurf/errors.hpp"
#include "hypersurf/geodesic.hpp"
#include "hypersurf/surgery.hpp"

namespace hypersurf {

namespace fs = std::filesystem;

namespace {

fs::path sidecar_path(const fs::path& report) {
    fs::path p = report;
    p.replace_extension(".json");
    if (p == report) p += ".report.json";
    return p;
}

Source parse_source(const std::string& text) {
    const auto colon = text.find(':');
    const std::string vertex = text.substr(0, colon);
    char* end = nullptr;
    const long v = std::strtol(vertex.c_str(), &end, 10);
    if (vertex.empty() || *end != '\0' || v < 0) throw ConfigError("--source: bad vertex index '" + vertex + "'");
    Source s{static_cast<int>(v), 0.0};
    if (colon != std::string::npos) {
        const std::string d = text.substr(colon + 1);
        s.distance = std::strtod(d.c_str(), &end);
        if (d.empty() || *end != '\0' || !(s.distance >= 0.0)) throw ConfigError("--source: bad distance '" + d + "'");
    }
    return s;
}

int run_distance(const CliOptions& opts, const RunConfig& cfg, std::ostream& log) {
    const fs::path dir = opts.from.value_or(opts.out);
    const fs::path mesh_path = opts.mesh ? fs::path(*opts.mesh) : dir / cfg.output.mesh;
    const TriMesh mesh = load_obj_trimesh(mesh_path);
    std::vector<Source> sources;
    for (const auto& s : opts.sources) sources.push_back(parse_source(s));
    if (sources.empty()) sources.push_back({0, 0.0});
    for (const auto& s : sources) {
        if (static_cast<std::size_t>(s.vertex) >= mesh.vertices.size()) {
            throw ConfigError("source vertex " + std::to_string(s.vertex) + " out of range (mesh has " +
                              std::to_string(mesh.vertices.size()) + " vertices)");
        }
    }
    const FastMarchResult fm = fast_march(mesh, sources);
    std::ostringstream csv;
    csv << "vertex_index,x,y,z,D\n";
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3& p = mesh.vertices[v];
        csv << v << "," << format_double(p.x) << "," << format_double(p.y) << "," << format_double(p.z) << ","
            << format_double(fm.distance[v]) << "\n";
    }
    const fs::path out = fs::path(opts.out) / "distance.csv";
    write_text(out, csv.str());
    if (!opts.quiet) {
        log << "distance: " << mesh.vertices.size() << " vertices, " << fm.unreachable.size() << " unreachable, "
            << fm.fallback_updates << " fallback updates -> " << out.string() << "\n";
    }
    return kExitOk;
}

int run_validate(const CliOptions& opts, const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    const fs::path dir = opts.from.value_or(opts.out);
    const MeshBundle bundle = import_mesh(dir / cfg.output.mesh, dir / cfg.output.csv);
    const DiagnosticsReport report = compute_diagnostics(bundle.complex, bundle.stages);
    const fs::path report_path = fs::path(opts.out) / cfg.output.report;
    write_text(report_path, format_report(report));
    write_text(sidecar_path(report_path), report_json(report));
    if (!opts.quiet) log << format_report(report);
    if (!report.validation.ok()) {
        err << "error: validation failed";
        if (!report.validation.failures.empty()) err << ": " << report.validation.failures.front();
        err << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

RunConfig resolve_config(const CliOptions& opts) {
    RunConfig cfg = opts.config ? load_config(*opts.config) : RunConfig{};
    if (opts.tol) {
        if (!(*opts.tol > 0.0)) throw ConfigError("--tol: must be positive");
        cfg.tol = *opts.tol;
    }
    if (opts.epsilon) {
        if (!(*opts.epsilon >= 0.0)) throw ConfigError("--epsilon: must be nonnegative");
        cfg.curvature.epsilon = *opts.epsilon;
        cfg.schedule.clear();
    }
    if (opts.sectors) {
        if (*opts.sectors < 2) throw ConfigError("--sectors: need n >= 2");
        cfg.n = *opts.sectors;
        cfg.angles.clear();
    }
    if (opts.grid) {
        if (opts.grid->first < 1 || opts.grid->second < 1) throw ConfigError("--grid: sizes must be positive");
        cfg.I = opts.grid->first;
        cfg.J = opts.grid->second;
    }
    return cfg;
}

MeshBundle generate(const RunConfig& cfg) {
    const std::vector<double> angles = effective_angles(cfg);
    GenerationResult g = patch_sectors(angles, cfg.u_max, cfg.v_max, cfg.I, cfg.J, cfg.curvature,
                                       iteration_config(cfg), geodesic_distance_provider());
    return {std::move(g.complex), std::move(g.stages)};
}

MeshBundle apply_surgeries(MeshBundle bundle, const RunConfig& cfg) {
    IterationConfig it = iteration_config(cfg);
    it.epsilon_schedule.clear();
    for (std::size_t k = 0; k < cfg.surgery.size(); ++k) {
        const std::string where = "surgery[" + std::to_string(k) + "]: ";
        StageStats st;
        try {
            bundle.complex = insert_branch_point(std::move(bundle.complex), cfg.surgery[k], cfg.curvature, it,
                                                 geodesic_distance_provider(), &st);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError(where + e.what());
        }
        bundle.stages.push_back(std::move(st));
    }
    return bundle;
}

void write_outputs(const MeshBundle& bundle, const RunConfig& cfg, const std::string& dir, std::ostream& log) {
    const fs::path base(dir);
    const fs::path mesh_path = base / cfg.output.mesh;
    const fs::path csv_path = base / cfg.output.csv;
    export_mesh(bundle, mesh_path, csv_path);
    const MeshBundle reread = import_mesh(mesh_path, csv_path);
    const DiagnosticsReport report = compute_diagnostics(reread.complex, reread.stages);
    const fs::path report_path = base / cfg.output.report;
    write_text(report_path, format_report(report));
    write_text(sidecar_path(report_path), report_json(report));
    log << "wrote " << mesh_path.string() << " (" << report.sectors << " sectors, " << report.vertices
        << " vertices, " << report.quads << " quads); max route residual " << report.max_route
        << ", validation " << (report.validation.ok() ? "ok" : "FAILED") << "\n";
}

int run(const CliOptions& opts, std::ostream& log, std::ostream& err) {
    std::ostringstream sink;
    std::ostream& out = opts.quiet ? sink : log;
    try {
        if (opts.command == "generate" || opts.command == "surgery") {
            if (!opts.config) throw ConfigError("--config is required for " + opts.command);
        }
        const RunConfig cfg = resolve_config(opts);
        if (opts.command == "generate") {
            write_outputs(generate(cfg), cfg, opts.out, out);
            return kExitOk;
        }
        if (opts.command == "surgery") {
            if (cfg.surgery.empty()) throw ConfigError("surgery: config has no surgery entries");
            MeshBundle base;
            if (opts.from) {
                const fs::path dir(*opts.from);
                base = import_mesh(dir / cfg.output.mesh, dir / cfg.output.csv);
            } else {
                base = generate(cfg);
            }
            write_outputs(apply_surgeries(std::move(base), cfg), cfg, opts.out, out);
            return kExitOk;
        }
        if (opts.command == "distance") return run_distance(opts, cfg, out);
        if (opts.command == "validate") return run_validate(opts, cfg, out, err);
        throw ConfigError("unknown subcommand '" + opts.command + "'");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace hypersurf
