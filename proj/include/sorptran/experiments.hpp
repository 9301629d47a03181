#pragma once

#include "sorptran/exact.hpp"
#include "sorptran/grid.hpp"
#include "sorptran/isotherm.hpp"

#include <optional>
#include <vector>

namespace sorptran {

// Initial conditions sample cell centres; ghosts are left at zero for the
// boundary policy to fill.

/// u = 1 on 0 < x < 1, 0 elsewhere.
Field ic_step_1d(const Grid1D& g, const IsothermSpec& iso);
/// Four Gaussians on the line: centres -pi/2, pi/2 (height 0.5, width 2), 2 pi, 3 pi.
Field ic_gauss4_1d(const Grid1D& g, const IsothermSpec& iso);
/// Four Gaussians centred at (+-0.5, +-0.5), exponent 50.
Field ic_gauss4_2d(const Grid2D& g, const IsothermSpec& iso);
Field ic_constant_1d(const Grid1D& g, const IsothermSpec& iso, double value);
Field ic_constant_2d(const Grid2D& g, const IsothermSpec& iso, double value);
/// Exact step solution at time t: Q is the cell average of F(u), U = F^{-1}(Q).
Field ic_exact_step(const Grid1D& g, const StepRiemannSolution& exact, double t);

double gauss4_1d(double x);
double gauss4_2d(double x, double y);

/// h * sum |U_i - R_i| over interior cells; both fields on grid g.
double l1_error(const Grid1D& g, const Field& num, const Field& ref);
/// h^2 * sum over interior cells.
double l1_error(const Grid2D& g, const Field& num, const Field& ref);
/// Against exact cell averages of u at time t.
double l1_error(const Grid1D& g, const Field& num, const StepRiemannSolution& exact, double t);

/// log2(E_coarse / E_fine).
double eoc(double e_coarse, double e_fine);

struct ConvergenceRow {
    int M = 0;
    int N = 0;
    std::optional<double> E;
    std::optional<double> EOC;
    double cpu_seconds = 0.0;
    double c_max = 0.0;
};

/// Fills EOC from consecutive rows that both have an error.
void fill_eoc(std::vector<ConvergenceRow>& rows);

} // namespace sorptran
