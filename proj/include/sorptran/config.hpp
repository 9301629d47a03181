#pragma once

#include "sorptran/scheme.hpp"
#include "sorptran/solver1d.hpp"
#include "sorptran/solver2d.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sorptran {

enum class VelocityKind { constant, cosine, tabulated, rotation };
enum class InitialKind { step, gauss4, constant, exact_step };
enum class SideKind { dirichlet, outflow, exact };
enum class ReferenceKind { none, exact, oracle };

struct SideConfig {
    SideKind kind = SideKind::dirichlet;
    double value = 0.0;

    bool operator==(const SideConfig&) const = default;
};

/// A run description as read from an INI file. Values are kept as written; building
/// solver configurations happens in to_run_1d / to_run_2d.
struct RunConfigFile {
    int dimension = 1;
    double x_left = 0.0;
    double x_right = 1.0;
    int M = 4;
    int N = 1;
    double t0 = 0.0;
    double T = 1.0;

    double a = 1.0;
    double p = 1.0;

    SchemeConfig scheme;

    VelocityKind velocity = VelocityKind::constant;
    double velocity_value = 1.0;   ///< constant 1D
    double velocity_vx = 1.0;      ///< constant 2D
    double velocity_vy = 0.0;
    double amplitude = 1.0;        ///< cosine
    double wavenumber = 1.0;
    double omega = 1.0;            ///< rotation
    std::vector<double> table_x;   ///< tabulated
    std::vector<double> table_v;

    InitialKind ic = InitialKind::step;
    double ic_value = 0.0;

    SideConfig left;
    SideConfig right{SideKind::outflow, 0.0};
    SideConfig west;
    SideConfig east;
    SideConfig south;
    SideConfig north;

    ReferenceKind reference = ReferenceKind::none;
    int refine = 4;

    std::string out_dir = "out";
    std::vector<std::string> formats{"profile"};
};

/// Parses INI text. Syntax errors and every constraint violation are reported
/// together in one ValidationError; syntax errors carry "line N".
RunConfigFile parse_config(std::string_view text);
/// Reads and parses a file; IoError if it cannot be read.
RunConfigFile load_config(const std::filesystem::path& path);

/// Normalized INI text: fixed section and key order, only keys relevant to the
/// chosen kinds, numbers in shortest round-trip form.
std::string serialize_config(const RunConfigFile& c);

Run1DConfig to_run_1d(const RunConfigFile& c);
Run2DConfig to_run_2d(const RunConfigFile& c);

} // namespace sorptran
