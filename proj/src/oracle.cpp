#include "sorptran/oracle.hpp"

#include "sorptran/errors.hpp"

#include <string>

namespace sorptran {

namespace {

int ratio(int fine, int coarse)
{
    if (coarse <= 0 || fine % coarse != 0)
        throw ValidationError({"fine grid does not refine the coarse grid by an integer factor"});
    return fine / coarse;
}

void check_refine(int r)
{
    if (r < 4) throw ValidationError({"reference.refine must be >= 4, got " + std::to_string(r)});
}

} // namespace

Field restrict_field(const Grid1D& fine, const Field& f, const Grid1D& coarse)
{
    const int r = ratio(fine.cells(), coarse.cells());
    Field out{std::vector<double>(coarse.size(), 0.0), std::vector<double>(coarse.size(), 0.0)};
    for (int i = 1; i <= coarse.cells(); ++i) {
        double su = 0.0;
        double sq = 0.0;
        for (int k = 0; k < r; ++k) {
            const std::size_t idx = fine.index((i - 1) * r + k + 1);
            su += f.u[idx];
            sq += f.q[idx];
        }
        out.u[coarse.index(i)] = su / r;
        out.q[coarse.index(i)] = sq / r;
    }
    return out;
}

Field restrict_field(const Grid2D& fine, const Field& f, const Grid2D& coarse)
{
    const int r = ratio(fine.cells(), coarse.cells());
    const double area = static_cast<double>(r) * r;
    Field out{std::vector<double>(coarse.size(), 0.0), std::vector<double>(coarse.size(), 0.0)};
    for (int j = 1; j <= coarse.cells(); ++j) {
        for (int i = 1; i <= coarse.cells(); ++i) {
            double su = 0.0;
            double sq = 0.0;
            for (int b = 0; b < r; ++b) {
                for (int a = 0; a < r; ++a) {
                    const std::size_t idx = fine.index((i - 1) * r + a + 1, (j - 1) * r + b + 1);
                    su += f.u[idx];
                    sq += f.q[idx];
                }
            }
            out.u[coarse.index(i, j)] = su / area;
            out.q[coarse.index(i, j)] = sq / area;
        }
    }
    return out;
}

Field fine_grid_oracle(const Run1DConfig& coarse, int r)
{
    check_refine(r);
    Run1DConfig fine = coarse;
    fine.grid = Grid1D(coarse.grid.x_left(), coarse.grid.x_right(), coarse.grid.cells() * r);
    fine.steps = coarse.steps * r;
    fine.scheme.kind = SchemeKind::hires_weno;
    fine.keep_step_diagnostics = false;
    const RunResult1D res = run_1d(fine);
    if (res.status != RunStatus::ok) throw SolverError("oracle run became unstable", 0.0, 0.0);
    return restrict_field(fine.grid, res.final, coarse.grid);
}

Field fine_grid_oracle(const Run2DConfig& coarse, int r)
{
    check_refine(r);
    Run2DConfig fine = coarse;
    fine.grid = Grid2D(coarse.grid.x_left(), coarse.grid.x_right(), coarse.grid.cells() * r);
    fine.steps = coarse.steps * r;
    fine.scheme.kind = SchemeKind::hires_weno;
    fine.keep_step_diagnostics = false;
    const RunResult2D res = run_2d(fine);
    if (res.status != RunStatus::ok) throw SolverError("oracle run became unstable", 0.0, 0.0);
    return restrict_field(fine.grid, res.final, coarse.grid);
}

} // namespace sorptran
