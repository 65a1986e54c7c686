#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hypersurf/cli.hpp"

namespace {

std::pair<int, int> parse_grid(const std::string& text) {
    std::istringstream in(text);
    int i = 0;
    int j = 0;
    char comma = 0;
    if (!(in >> i >> comma >> j) || comma != ',' || !in.eof()) throw CLI::ValidationError("--grid", "expected I,J");
    return {i, j};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete asymptotic K-surfaces with prescribed negative curvature"};
    app.require_subcommand(1);

    hypersurf::CliOptions opts;
    std::string config;
    std::string grid;
    double tol = 0.0;
    double epsilon = 0.0;
    int sectors = 0;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON run configuration");
        sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
        sub->add_option("--tol", tol, "Outer-iteration tolerance on CHANGE");
        sub->add_option("--epsilon", epsilon, "Target epsilon (replaces the schedule)");
        sub->add_option("--sectors", sectors, "n, for 2n sectors");
        sub->add_option("--grid", grid, "Grid size I,J per sector");
        sub->add_flag("--quiet", opts.quiet, "Suppress progress output");
    };

    CLI::App* gen = app.add_subcommand("generate", "Generate the patched complex and export it");
    add_common(gen);
    CLI::App* surg = app.add_subcommand("surgery", "Insert branch points and re-converge");
    add_common(surg);
    surg->add_option("--from", opts.from, "Directory of a previous generate run");
    CLI::App* dist = app.add_subcommand("distance", "Fast-marching distance on an OBJ mesh");
    add_common(dist);
    dist->add_option("--mesh", opts.mesh, "OBJ file (default: <out>/mesh.obj)");
    dist->add_option("--source", opts.sources, "Source vertex[:distance], 0-based; repeatable");
    CLI::App* val = app.add_subcommand("validate", "Recompute diagnostics from an exported mesh");
    add_common(val);
    val->add_option("--from", opts.from, "Directory holding mesh and CSV (default: --out)");

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        opts.command = sub->get_name();
        if (sub->count("--config")) opts.config = config;
        if (sub->count("--tol")) opts.tol = tol;
        if (sub->count("--epsilon")) opts.epsilon = epsilon;
        if (sub->count("--sectors")) opts.sectors = sectors;
        if (sub->count("--grid")) opts.grid = parse_grid(grid);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hypersurf::kExitConfig;
    }
    return hypersurf::run(opts, std::cout, std::cerr);
}
