#pragma once

#include "sorptran/boundary.hpp"
#include "sorptran/grid.hpp"
#include "sorptran/isotherm.hpp"
#include "sorptran/scheme.hpp"
#include "sorptran/solver1d.hpp"
#include "sorptran/velocity.hpp"

#include <functional>
#include <vector>

namespace sorptran {

struct Problem2D {
    Grid2D grid;
    EdgeVelocity2D edges;
    IsothermSpec iso;
    Boundary2D bc;

    Problem2D(Grid2D g, const VelocityField2D& vel, IsothermSpec s, Boundary2D b);
};

struct StepResult2D {
    Field field;
    StepDiagnostics diag;
    LimiterState2D limiter;
};

// 2D steps sweep the four orderings (i up, j up), (i down, j up), (i down, j down),
// (i up, j down) as one round; convergence is tested after each round and
// SchemeConfig::max_sweeps bounds the number of rounds. sweeps_used counts orderings.

StepResult2D step_implicit1_2d(const Problem2D& p, const Field& current, double t, double tau,
                               const SchemeConfig& cfg);
StepResult2D step_compact2_2d(const Problem2D& p, const Field& current, double t, double tau,
                              const SchemeConfig& cfg);
StepResult2D step_hires_weno_2d(const Problem2D& p, const Field& current, double t, double tau,
                                const SchemeConfig& cfg);
StepResult2D step_limited_2d(const Problem2D& p, const Field& current, double t, double tau,
                             const SchemeConfig& cfg, const LimiterState2D& coef, const Field* guess = nullptr);
/// Explicit kinds are not available in 2D and raise ValidationError.
StepResult2D step_2d(const Problem2D& p, const Field& current, double t, double tau, const SchemeConfig& cfg);

LimiterState2D compute_limiter_2d(const Grid2D& g, const Field& pred, const Field& old, double eps);

using InitialCondition2D = std::function<Field(const Grid2D&, const IsothermSpec&)>;

struct Run2DConfig {
    Grid2D grid{-1.0, 1.0, 4};
    VelocityField2D velocity = VelocityField2D::rotation(1.0);
    IsothermSpec iso{1.0, 1.0};
    SchemeConfig scheme;
    Boundary2D bc;
    double t0 = 0.0;
    double t_end = 1.0;
    int steps = 1;
    InitialCondition2D initial;
    bool keep_step_diagnostics = true;

    void validate() const;
};

struct RunResult2D {
    Field initial;
    Field final;
    std::vector<StepDiagnostics> steps;
    ConservationLedger ledger;
    RunStatus status = RunStatus::ok;
    int steps_taken = 0;
    double tau = 0.0;
    Courant2D c_max{0.0, 0.0};
    double wall_seconds = 0.0;
    long newton_iters_total = 0;
    int max_sweeps_used = 0;
    double max_envelope_violation = 0.0;
    int range_violations = 0;
};

RunResult2D run_2d(const Run2DConfig& cfg);

} // namespace sorptran
