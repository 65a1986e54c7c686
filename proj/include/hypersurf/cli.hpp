#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hypersurf/config.hpp"
#include "hypersurf/mesh_io.hpp"

namespace hypersurf {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

struct CliOptions {
    std::string command;  // generate | surgery | distance | validate
    std::optional<std::string> config;
    std::string out = ".";
    std::optional<double> tol;
    std::optional<double> epsilon;
    std::optional<int> sectors;
    std::optional<std::pair<int, int>> grid;
    bool quiet = false;

    std::optional<std::string> from;  // surgery/validate: directory holding a previous run
    std::optional<std::string> mesh;  // distance: OBJ to load
    std::vector<std::string> sources; // distance: "vertex[:distance]", 0-based as in the CSV vertex_index
};

/// Config file plus command-line overrides.
RunConfig resolve_config(const CliOptions& opts);

/// Continuation on the patched complex.
MeshBundle generate(const RunConfig& cfg);

/// Applies cfg.surgery in order, appending one stage record per surgery.
MeshBundle apply_surgeries(MeshBundle bundle, const RunConfig& cfg);

/// Exports mesh, CSV and report into `dir`. The report is computed from the re-imported files.
void write_outputs(const MeshBundle& bundle, const RunConfig& cfg, const std::string& dir, std::ostream& log);

/// Runs one subcommand. Errors are printed to `err` and mapped to exit codes.
int run(const CliOptions& opts, std::ostream& log, std::ostream& err);

}  // namespace hypersurf
