#pragma once

#include "sorptran/boundary.hpp"
#include "sorptran/grid.hpp"
#include "sorptran/isotherm.hpp"
#include "sorptran/scheme.hpp"
#include "sorptran/velocity.hpp"

#include <functional>
#include <vector>

namespace sorptran {

/// Everything a single 1D time step needs besides the current field.
struct Problem1D {
    Grid1D grid;
    EdgeVelocity1D edges;
    IsothermSpec iso;
    Boundary1D bc;

    Problem1D(Grid1D g, const VelocityField1D& vel, IsothermSpec s, Boundary1D b);
};

struct StepResult1D {
    Field field;
    StepDiagnostics diag;
    LimiterState limiter;  ///< coefficients used by compact2 / hires_weno, empty otherwise
};

/// `current` must carry ghosts valid at time t; the result carries ghosts at t + tau.
StepResult1D step_explicit1(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg);
StepResult1D step_explicit2(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg);
StepResult1D step_implicit1(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg);
StepResult1D step_compact2(const Problem1D& p, const Field& current, double t, double tau,
                           const SchemeConfig& cfg);
StepResult1D step_hires_weno(const Problem1D& p, const Field& current, double t, double tau,
                             const SchemeConfig& cfg);

/// Implicit limited step with caller-supplied frozen weights and limiter values.
/// `guess` seeds the sweeps (interior values), defaulting to `current`.
StepResult1D step_limited(const Problem1D& p, const Field& current, double t, double tau,
                          const SchemeConfig& cfg, const LimiterState& coef, const Field* guess = nullptr);

StepResult1D step(const Problem1D& p, const Field& current, double t, double tau, const SchemeConfig& cfg);

/// Interface value at x_{k+1/2} seen from cell k (positive velocity branch).
double face_plus(const Field& next, const Field& old, const LimiterState* coef, std::size_t k);
/// Interface value at x_{k-1/2} seen from cell k (negative velocity branch).
double face_minus(const Field& next, const Field& old, const LimiterState* coef, std::size_t k);

/// WENO weights and limiter values from the predictor `pred` and old values, for cells 0..M+1.
LimiterState compute_limiter(const Grid1D& g, const Field& pred, const Field& old, double eps);

using InitialCondition1D = std::function<Field(const Grid1D&, const IsothermSpec&)>;

struct Run1DConfig {
    Grid1D grid{0.0, 1.0, 4};
    VelocityField1D velocity = VelocityField1D::constant(1.0);
    IsothermSpec iso{1.0, 1.0};
    SchemeConfig scheme;
    Boundary1D bc;
    double t0 = 0.0;
    double t_end = 1.0;
    int steps = 1;
    InitialCondition1D initial;
    bool keep_step_diagnostics = true;

    void validate() const;
};

struct ConservationLedger {
    double initial_mass = 0.0;   ///< h * sum Q at t0
    double final_mass = 0.0;
    double boundary_net = 0.0;   ///< sum over steps of (flux_right - flux_left)
    double drift = 0.0;          ///< final - initial + boundary_net
    double relative_drift = 0.0;
    double max_step_residual = 0.0;  ///< max |mass_residual| over steps
};

enum class RunStatus { ok, unstable };

struct RunResult1D {
    Field initial;
    Field final;
    std::vector<StepDiagnostics> steps;
    ConservationLedger ledger;
    RunStatus status = RunStatus::ok;
    int steps_taken = 0;
    double tau = 0.0;
    double c_max = 0.0;
    double wall_seconds = 0.0;
    long newton_iters_total = 0;
    int max_sweeps_used = 0;
    double max_envelope_violation = 0.0;
    int range_violations = 0;
};

/// Runs `steps` uniform steps on [t0, t_end]. Explicit blow-up stops the run with
/// status unstable; a solver failure throws SolverError.
RunResult1D run_1d(const Run1DConfig& cfg);

} // namespace sorptran
