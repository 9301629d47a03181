#pragma once

#include "sorptran/isotherm.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace sorptran {

enum class SchemeKind {
    explicit1,   ///< first-order upwind, explicit in the fluxes
    explicit2,   ///< Heun time stepping with Fromm face values (explicit reference for second order)
    implicit1,   ///< first-order upwind, implicit, fast sweeping
    compact2,    ///< compact implicit second order with a fixed omega
    hires_weno,  ///< compact implicit with WENO weights and a-priori limiter (predictor-corrector)
};

std::string_view scheme_name(SchemeKind k) noexcept;
std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept;
bool is_explicit(SchemeKind k) noexcept;

struct SchemeConfig {
    SchemeKind kind = SchemeKind::implicit1;
    double omega = 0.5;        ///< compact2 blend between backward and forward candidates
    NewtonConfig newton;
    double sweep_tol = 1e-10;  ///< max |change of U| between consecutive sweeps
    int max_sweeps = 100;
    double weno_eps = 1e-6;
    /// hires_weno: number of corrector solves; passes after the first recompute
    /// the weights from the previous corrector.
    int corrector_passes = 1;
    /// Forces l = 0 for compact2 / hires_weno (reduces them to implicit1).
    bool force_first_order = false;
    /// hires_weno: during each sweep a cell may scale down its own outflow l so that
    /// U^{n+1} stays inside the range of U^n, its inflow neighbours and inflow faces.
    bool local_bounds = true;
    int bound_bisections = 8;

    void validate() const;
};

/// Per-cell WENO weights and limiter values for both velocity signs, storage-indexed like Field.
struct LimiterState {
    std::vector<double> w_plus;
    std::vector<double> w_minus;
    std::vector<double> l_plus;
    std::vector<double> l_minus;

    void resize(std::size_t n);
};

struct LimiterState2D {
    LimiterState x;
    LimiterState y;
};

struct StepDiagnostics {
    int sweeps_used = 0;        ///< sweeps of the final (corrector) solve
    int predictor_sweeps = 0;   ///< hires_weno only
    long newton_iters_total = 0;
    /// tau times the signed edge flux through the left / right boundary
    /// (2D: west+south and east+north, multiplied by the edge length).
    double flux_left = 0.0;
    double flux_right = 0.0;
    double mass_before = 0.0;   ///< h^d * sum Q^n
    double mass_after = 0.0;
    /// sum Q^{n+1} - sum Q^n + (flux_right - flux_left) / h^d
    double mass_residual = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    bool finite = true;
    int range_violations = 0;   ///< cells left below -1e-10 after the solve
    /// Largest distance of a reconstructed interface value (final U, frozen l and omega)
    /// outside the min-max envelope of its stencil values.
    double envelope_violation = 0.0;
    double wall_time = 0.0;
};

} // namespace sorptran
