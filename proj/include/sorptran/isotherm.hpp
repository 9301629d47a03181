#pragma once

namespace sorptran {

/// Controls for the scalar Newton solves used everywhere a Q = F(U) relation is inverted.
struct NewtonConfig {
    double abs_tol = 1e-12;   ///< residual tolerance |G(u)| <= abs_tol
    int max_iter = 50;
    double reg_floor = 1e-6;  ///< derivative is evaluated at max(u, reg_floor)

    void validate() const;
};

/**
 * Freundlich isotherm F(u) = u + a u^p.
 *
 * F is strictly increasing on [0, inf). Inside the implicit solvers F is
 * continued linearly (F(u) = u) for u < 0 so that every per-cell equation has
 * a unique real root; the public functions below reject negative input.
 */
class IsothermSpec {
public:
    IsothermSpec(double a, double p);

    double a() const noexcept { return a_; }
    double p() const noexcept { return p_; }

    /// F without domain checks, linear continuation below zero.
    double eval_extended(double u) const noexcept;

private:
    double a_;
    double p_;
};

double isotherm_F(const IsothermSpec& s, double u);

/// Retardation factor 1 + p a max(u, floor)^(p-1).
double isotherm_dF(const IsothermSpec& s, double u, const NewtonConfig& cfg);

/// Returns u >= 0 with |F(u) - q| <= abs_tol. Throws SolverError on non-convergence.
double isotherm_invert(const IsothermSpec& s, double q, const NewtonConfig& cfg);

struct CellSolution {
    double u;
    int iterations;
};

/**
 * Root of G(u) = F(u) + A u - B with A >= 0.
 *
 * Every per-cell equation of the schemes reduces to this form once the
 * neighbouring values are frozen. For p >= 1 the iteration runs in u; for
 * p < 1 it runs in s = u^p where G is convex with a derivative bounded away
 * from zero. `guess` seeds the iteration (the previous sweep value).
 */
CellSolution solve_cell(const IsothermSpec& s, double A, double B, const NewtonConfig& cfg,
                        double guess);

} // namespace sorptran
