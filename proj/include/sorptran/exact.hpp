#pragma once

#include "sorptran/isotherm.hpp"

#include <vector>

namespace sorptran {

/**
 * Entropy solution of the step problem u(x, 0) = 1 on (0, 1), 0 elsewhere, v = 1.
 *
 * In terms of q the equation reads q_t + f(q)_x = 0 with f = F^{-1}. For p < 1
 * the left edge opens a rarefaction and the right edge carries a shock; for
 * p > 1 the roles swap. Characteristics travel at 1 / F'(u), shocks at
 * [u] / [F(u)] = 1 / F(1). Valid until the fan meets the shock.
 */
class StepRiemannSolution {
public:
    explicit StepRiemannSolution(IsothermSpec iso);

    const IsothermSpec& isotherm() const noexcept { return iso_; }
    bool linear() const noexcept { return linear_; }

    /// First time at which the fan reaches the shock (infinite for p = 1).
    double t_interact() const noexcept { return t_interact_; }

    /// Throws DomainError unless 0 <= t < t_interact.
    double u(double x, double t) const;
    double q(double x, double t) const;

    /// Position of the single discontinuity.
    double shock_position(double t) const;
    /// Fan extent [lo, hi]; both equal the shock position for p = 1.
    double fan_lo(double t) const;
    double fan_hi(double t) const;

    /// Sorted positions where u or its derivative jumps.
    std::vector<double> breakpoints(double t) const;

    double cell_average_u(double x_l, double x_r, double t) const;
    double cell_average_q(double x_l, double x_r, double t) const;

private:
    void check_time(double t) const;
    double fan_value(double xi, double t) const;
    template <class G> double average(double x_l, double x_r, double t, G&& g) const;

    IsothermSpec iso_;
    bool linear_;
    double t_interact_;
};

} // namespace sorptran
