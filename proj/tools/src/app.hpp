#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbgk/scenarios.hpp"

namespace mbgk::app {

namespace fs = std::filesystem;

/// Exit codes of the command-line driver.
enum ExitCode : int { Success = 0, ConfigError = 2, SolverError = 3, IoFailure = 4 };

struct RunSummary {
    long steps = 0;
    double time = 0.0;
    int snapshots = 0;
    long guard_triggers = 0;
    double max_drift = 0.0;   ///< largest relative drift of the conserved totals from step 0
    double seconds = 0.0;
};

/// Runs one scenario to t_end and writes totals.csv, moments_XXXX.csv, slice_XXXX.csv and manifest.json.
RunSummary run(const ScenarioConfig& config, const fs::path& out, std::ostream* log = nullptr);

struct ConvergenceRow {
    int level = 0;
    int cells = 0;
    double dt = 0.0;
    std::array<double, 2> error{0.0, 0.0};  ///< against level + 1
    std::array<double, 2> order{0.0, 0.0};  ///< log2 of the ratio to the previous error; NaN for the first
};

/// Self-convergence study on meshes of cells * 2^l, l = 0..levels-1, with dt halved per level.
/// The velocity grids of every level are those of level 0. Writes convergence.csv.
std::vector<ConvergenceRow> convergence(const ScenarioConfig& config, int levels, const fs::path& out,
                                        std::ostream* log = nullptr);

/// Writes reldiff_XXXX.csv for every snapshot present in both runs. Returns the largest |r|
/// per column over all snapshots, in the order of reldiff_columns().
std::vector<double> compare(const fs::path& run_a, const fs::path& run_b, const fs::path& out,
                            std::ostream* log = nullptr);
std::vector<std::string> reldiff_columns();

/// Columns of one moments snapshot.
struct MomentTable {
    double time = 0.0;
    long step = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
MomentTable read_moments(const fs::path& file);

/// 64-bit FNV-1a of a string, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace mbgk::app
