#pragma once

#include "sorptran/solver1d.hpp"
#include "sorptran/solver2d.hpp"

namespace sorptran {

/// hires_weno run at (r M, r N), cell-averaged back onto the coarse grid.
/// The returned field has the coarse layout; ghosts are zero.
/// Throws ValidationError for r < 4.
Field fine_grid_oracle(const Run1DConfig& coarse, int r);
Field fine_grid_oracle(const Run2DConfig& coarse, int r);

/// Averages r consecutive fine cells into each coarse cell (u and q separately).
Field restrict_field(const Grid1D& fine, const Field& f, const Grid1D& coarse);
Field restrict_field(const Grid2D& fine, const Field& f, const Grid2D& coarse);

} // namespace sorptran
