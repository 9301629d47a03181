#include "sorptran/cli.hpp"

#include "sorptran/config.hpp"
#include "sorptran/csv.hpp"
#include "sorptran/errors.hpp"
#include "sorptran/exact.hpp"
#include "sorptran/experiments.hpp"
#include "sorptran/oracle.hpp"
#include "sorptran/presets.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace sorptran {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

/// --out wins, then SORPTRAN_OUT, then the fallback.
fs::path resolve_out(const std::string& flag, const std::string& fallback)
{
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SORPTRAN_OUT"); env != nullptr && *env != '\0') return env;
    return fallback;
}

bool wants(const RunConfigFile& c, std::string_view format)
{
    for (const auto& f : c.formats)
        if (f == format) return true;
    return false;
}

std::optional<double> error_1d(const RunConfigFile& c, const Run1DConfig& cfg, const Field& final)
{
    switch (c.reference) {
    case ReferenceKind::none:
        return std::nullopt;
    case ReferenceKind::exact:
        return l1_error(cfg.grid, final, StepRiemannSolution(cfg.iso), cfg.t_end);
    case ReferenceKind::oracle:
        return l1_error(cfg.grid, final, fine_grid_oracle(cfg, c.refine));
    }
    return std::nullopt;
}

void print_common(std::ostream& out, const RunConfigFile& c, int steps_taken, double tau, double wall,
                  int max_sweeps, const ConservationLedger& ledger, std::optional<double> E)
{
    out << "scheme " << scheme_name(c.scheme.kind) << ", M " << c.M << ", N " << c.N << ", tau "
        << format_number(tau) << '\n';
    out << "steps taken " << steps_taken << ", max sweeps " << max_sweeps << ", wall " << format_number(wall)
        << " s\n";
    out << "mass drift " << format_number(ledger.drift) << " (relative " << format_number(ledger.relative_drift)
        << "), max step residual " << format_number(ledger.max_step_residual) << '\n';
    if (E) out << "L1 error " << format_number(*E) << '\n';
}

int run_config(const std::string& config_path, const std::string& out_flag, std::ostream& out, std::ostream& err)
{
    const RunConfigFile c = load_config(config_path);
    const fs::path dir = resolve_out(out_flag, c.out_dir);
    ConvergenceRow row;
    row.M = c.M;
    row.N = c.N;
    bool unstable = false;
    if (c.dimension == 1) {
        const Run1DConfig cfg = to_run_1d(c);
        const RunResult1D res = run_1d(cfg);
        unstable = res.status == RunStatus::unstable;
        row.cpu_seconds = res.wall_seconds;
        row.c_max = res.c_max;
        if (!unstable) row.E = error_1d(c, cfg, res.final);
        out << "C_max " << format_number(res.c_max) << '\n';
        print_common(out, c, res.steps_taken, res.tau, res.wall_seconds, res.max_sweeps_used, res.ledger, row.E);
        if (wants(c, "initial")) write_profile_csv(dir / "initial.csv", cfg.grid, res.initial);
        if (wants(c, "profile")) write_profile_csv(dir / "profile.csv", cfg.grid, res.final);
    } else {
        const Run2DConfig cfg = to_run_2d(c);
        const RunResult2D res = run_2d(cfg);
        row.cpu_seconds = res.wall_seconds;
        row.c_max = std::max(res.c_max.x, res.c_max.y);
        if (c.reference == ReferenceKind::oracle)
            row.E = l1_error(cfg.grid, res.final, fine_grid_oracle(cfg, c.refine));
        out << "C_max x " << format_number(res.c_max.x) << ", y " << format_number(res.c_max.y) << '\n';
        print_common(out, c, res.steps_taken, res.tau, res.wall_seconds, res.max_sweeps_used, res.ledger, row.E);
        if (wants(c, "initial")) write_grid_csv(dir / "initial.csv", cfg.grid, res.initial);
        if (wants(c, "profile")) write_grid_csv(dir / "profile.csv", cfg.grid, res.final);
    }
    if (wants(c, "convergence")) write_convergence_csv(dir / "convergence.csv", {row});
    if (unstable) {
        err << "explicit scheme became unstable; run stopped early\n";
        return kExitSolver;
    }
    return kExitOk;
}

int run_oracle(const std::string& config_path, int refine, const std::string& out_flag, std::ostream& out)
{
    const RunConfigFile c = load_config(config_path);
    const fs::path dir = resolve_out(out_flag, c.out_dir);
    const fs::path path = dir / ("oracle_r" + std::to_string(refine) + ".csv");
    if (c.dimension == 1) {
        const Run1DConfig cfg = to_run_1d(c);
        write_profile_csv(path, cfg.grid, fine_grid_oracle(cfg, refine));
    } else {
        const Run2DConfig cfg = to_run_2d(c);
        write_grid_csv(path, cfg.grid, fine_grid_oracle(cfg, refine));
    }
    out << "wrote " << path.string() << '\n';
    return kExitOk;
}

int run_named_preset(const std::string& name, const PresetOptions& opt, std::ostream& out, std::ostream& err)
{
    const PresetReport r = run_preset(name, opt);
    int failed = 0;
    for (const auto& c : r.checks) {
        out << (c.passed ? "PASS " : "FAIL ");
        if (!c.criterion.empty()) out << '[' << c.criterion << "] ";
        out << c.label << ": " << c.detail << '\n';
        if (!c.passed) ++failed;
    }
    int solver_failures = 0;
    for (const auto& l : r.ladders)
        for (const auto& s : l.stats)
            if (s.failure) {
                err << l.label << ": " << *s.failure << '\n';
                ++solver_failures;
            }
    out << r.name << ": " << r.checks.size() << " checks, " << failed << " failed, " << r.artifacts.size()
        << " artifacts under " << (opt.out_dir / r.name).string() << ", " << format_number(r.wall_seconds)
        << " s\n";
    return solver_failures > 0 ? kExitSolver : kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Finite-volume solver for transport with Freundlich sorption"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    auto* run = app.add_subcommand("run", "Run a single configuration file");
    run->add_option("--config", config_path, "INI configuration file")->required();
    run->add_option("--out", out_flag, "Output directory (overrides output.dir)");

    std::string preset_name;
    bool sequential = false;
    bool parallel = false;
    int rungs = 0;
    auto* preset = app.add_subcommand("preset", "Run a named experiment and its checks");
    preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
    preset->add_option("--out", out_flag, "Output directory (default out)");
    auto* seq_flag = preset->add_flag("--sequential-timing", sequential, "Run rungs one at a time (default)");
    preset->add_flag("--parallel", parallel, "Run the rungs of a ladder concurrently")->excludes(seq_flag);
    preset->add_option("--rungs", rungs, "Keep only the first k rungs of every ladder")->check(CLI::NonNegativeNumber);

    auto* list = app.add_subcommand("list-presets", "List the experiment presets");

    int refine = 4;
    auto* oracle = app.add_subcommand("oracle", "Write the refined reference solution for a configuration");
    oracle->add_option("--config", config_path, "INI configuration file")->required();
    oracle->add_option("--refine", refine, "Refinement factor r >= 4")->required();
    oracle->add_option("--out", out_flag, "Output directory (overrides output.dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*run) return run_config(config_path, out_flag, out, err);
        if (*oracle) return run_oracle(config_path, refine, out_flag, out);
        if (*list) {
            for (const auto& n : preset_names()) out << n << "  " << preset_summary(n) << '\n';
            return kExitOk;
        }
        if (*preset) {
            PresetOptions opt;
            opt.out_dir = resolve_out(out_flag, "out");
            opt.parallel = parallel;
            opt.max_rungs = rungs;
            return run_named_preset(preset_name, opt, out, err);
        }
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << "error: " << v << '\n';
        return kExitInvalid;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const DomainError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitInvalid;
}

} // namespace sorptran
