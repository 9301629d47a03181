#pragma once

#include "sorptran/experiments.hpp"
#include "sorptran/scheme.hpp"
#include "sorptran/solver1d.hpp"
#include "sorptran/solver2d.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sorptran {

struct PresetOptions {
    std::filesystem::path out_dir = "out";
    bool write_artifacts = true;
    /// Runs the rungs of a ladder concurrently. cpu_seconds is then not comparable.
    bool parallel = false;
    /// Keeps only the first k rungs of every ladder (0 keeps all).
    int max_rungs = 0;
};

/// One pass/fail line. `criterion` names the acceptance criterion it feeds ("A1".."A10"),
/// empty for targets that are reported but not part of acceptance.
struct PresetCheck {
    std::string criterion;
    std::string label;
    bool passed = false;
    std::string detail;
};

/// Per-rung run statistics beyond the convergence row.
struct RungStats {
    RunStatus status = RunStatus::ok;
    int steps_taken = 0;
    double u_min = 0.0;
    double u_max = 0.0;
    double max_abs_u = 0.0;
    bool finite = true;
    double max_envelope = 0.0;
    double max_step_residual = 0.0;
    double residual_limit = 0.0;
    double relative_drift = 0.0;
    int max_sweeps = 0;
    std::optional<std::string> failure;  ///< solver error message if the rung threw
};

struct LadderResult {
    std::string label;
    SchemeKind scheme = SchemeKind::implicit1;
    double p = 1.0;
    std::vector<ConvergenceRow> rows;
    std::vector<RungStats> stats;
};

struct PresetReport {
    std::string name;
    std::vector<LadderResult> ladders;
    std::vector<PresetCheck> checks;
    std::vector<std::filesystem::path> artifacts;
    double wall_seconds = 0.0;

    bool passed() const;
};

std::vector<std::string> preset_names();
std::string preset_summary(std::string_view name);
bool has_preset(std::string_view name);

/// Executes a preset; solver failures are recorded per rung, never thrown.
/// Throws ValidationError for unknown names.
PresetReport run_preset(std::string_view name, const PresetOptions& opt);

/// A single 1D ladder: configurations per (M, N) and an optional error against a reference.
struct Ladder1DSpec {
    std::string label;
    SchemeKind scheme = SchemeKind::implicit1;
    double p = 1.0;
    std::vector<int> Ms;
    std::function<int(int)> steps_of;
    std::function<Run1DConfig(int M, int N)> config;
    std::function<std::optional<double>(const Run1DConfig&, const RunResult1D&)> error;
    /// Called with the result of every successful rung (artifact writing).
    std::function<void(const Run1DConfig&, const RunResult1D&)> on_result;
};

LadderResult run_ladder(const Ladder1DSpec& spec, bool parallel);

/// Step-problem configuration on [0, 5], T = 3 with N = M / 10 unless given.
Run1DConfig step_problem_config(double p, SchemeKind kind, int M, int N);
/// Smooth window [0.5, 1.5] x [2, 3] of the step problem with exact ghost values.
Run1DConfig smooth_window_config(double p, SchemeKind kind, int M, int N);
/// v = cos x on [-4, 11], four Gaussians, zero Dirichlet data on both sides, T = 1.5.
Run1DConfig cos_velocity_config(double p, SchemeKind kind, int M, int N);
/// Rotation (-2 pi y, 2 pi x) on [-1, 1]^2, four Gaussians, T = 1/4.
Run2DConfig rotation_config(double p, SchemeKind kind, int M, int N);

} // namespace sorptran
