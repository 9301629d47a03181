#include "sorptran/grid.hpp"

#include "sorptran/errors.hpp"
#include "sorptran/isotherm.hpp"

#include <cmath>
#include <string>

namespace sorptran {

namespace {

std::vector<std::string> check_mesh(double xl, double xr, int m)
{
    std::vector<std::string> bad;
    if (!std::isfinite(xl) || !std::isfinite(xr) || !(xr > xl)) bad.emplace_back("grid.x_right must exceed grid.x_left");
    if (m < 4) bad.emplace_back("grid.M must be >= 4");
    return bad;
}

} // namespace

Grid1D::Grid1D(double x_left, double x_right, int cells)
    : x_left_(x_left), x_right_(x_right), cells_(cells), h_((x_right - x_left) / cells)
{
    if (auto bad = check_mesh(x_left, x_right, cells); !bad.empty()) throw ValidationError(std::move(bad));
}

Grid2D::Grid2D(double x_left, double x_right, int cells)
    : x_left_(x_left), x_right_(x_right), cells_(cells), h_((x_right - x_left) / cells)
{
    if (auto bad = check_mesh(x_left, x_right, cells); !bad.empty()) throw ValidationError(std::move(bad));
}

Field make_field(const IsothermSpec& iso, std::vector<double> u)
{
    Field f;
    f.q.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) f.q[k] = iso.eval_extended(u[k]);
    f.u = std::move(u);
    return f;
}

std::vector<double> interior(const Grid1D& g, const std::vector<double>& values)
{
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(g.index(1));
    return {first, first + g.cells()};
}

std::vector<double> interior(const Grid2D& g, const std::vector<double>& values)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.cells()) * g.cells());
    for (int j = 1; j <= g.cells(); ++j)
        for (int i = 1; i <= g.cells(); ++i) out.push_back(values[g.index(i, j)]);
    return out;
}

} // namespace sorptran
