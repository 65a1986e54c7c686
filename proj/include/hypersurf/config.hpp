#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hypersurf/amsler.hpp"
#include "hypersurf/surgery.hpp"

namespace hypersurf {

struct OutputPaths {
    std::string mesh = "mesh.obj";
    std::string csv = "mesh.csv";
    std::string report = "report.txt";  // the JSON sidecar replaces the extension with .json
};

struct RunConfig {
    CurvatureSpec curvature;
    std::vector<double> schedule;  // empty: geometric steps up to curvature.epsilon
    int n = 2;                     // 2n sectors
    std::vector<double> angles;    // empty: symmetric, pi / n each
    int I = 30;
    int J = 30;
    double u_max = 1.0;
    double v_max = 1.0;
    double tol = 1e-4;
    int max_iters = 100;
    std::vector<SurgerySpec> surgery;
    OutputPaths output;
    std::uint64_t seed = 0;  // reserved
};

/// JSON config; errors name the offending field, e.g. "surgery[0].m: must be odd".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Sector angles after applying the symmetric default.
std::vector<double> effective_angles(const RunConfig& cfg);

/// Epsilon stages: the explicit schedule, or geometric ratio-2 steps up to the target.
std::vector<double> effective_schedule(const RunConfig& cfg);

IterationConfig iteration_config(const RunConfig& cfg);

}  // namespace hypersurf
