#pragma once

#include "sorptran/grid.hpp"
#include "sorptran/isotherm.hpp"

#include <functional>

namespace sorptran {

/// Ghost-cell policy for one side of the domain. Both ghost layers receive the same treatment.
struct BoundarySide {
    enum class Kind { dirichlet, outflow, function };

    /// Ghost value from the cell [x_l, x_r] at time t (e.g. an exact cell average).
    using CellFunction = std::function<double(double x_l, double x_r, double t)>;

    Kind kind = Kind::dirichlet;
    double value = 0.0;
    CellFunction cell_value;

    static BoundarySide dirichlet(double v) { return {Kind::dirichlet, v, {}}; }
    static BoundarySide outflow() { return {Kind::outflow, 0.0, {}}; }
    static BoundarySide function(CellFunction f) { return {Kind::function, 0.0, std::move(f)}; }
};

struct Boundary1D {
    BoundarySide left = BoundarySide::dirichlet(0.0);
    BoundarySide right = BoundarySide::outflow();
};

/// Only dirichlet and outflow sides are supported in 2D.
struct Boundary2D {
    BoundarySide west = BoundarySide::dirichlet(0.0);
    BoundarySide east = BoundarySide::dirichlet(0.0);
    BoundarySide south = BoundarySide::dirichlet(0.0);
    BoundarySide north = BoundarySide::dirichlet(0.0);
};

/// Sets ghost u and q at time t. Outflow ghosts copy the adjacent interior cell.
void fill_ghosts(const Grid1D& g, const Boundary1D& bc, double t, const IsothermSpec& iso, Field& f);
void fill_ghosts(const Grid2D& g, const Boundary2D& bc, double t, const IsothermSpec& iso, Field& f);

/// Re-copies only the outflow ghosts after interior values changed.
void refresh_outflow(const Grid1D& g, const Boundary1D& bc, const IsothermSpec& iso, Field& f);
void refresh_outflow(const Grid2D& g, const Boundary2D& bc, const IsothermSpec& iso, Field& f);

} // namespace sorptran
