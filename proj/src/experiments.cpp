#include "sorptran/experiments.hpp"

#include "sorptran/errors.hpp"
#include "sorptran/simd/kernels.hpp"

#include <cmath>
#include <numbers>

namespace sorptran {

namespace {

template <class Fn>
Field sample_1d(const Grid1D& g, const IsothermSpec& iso, Fn&& fn)
{
    std::vector<double> u(g.size(), 0.0);
    for (int i = 1; i <= g.cells(); ++i) u[g.index(i)] = fn(g.center(i));
    return make_field(iso, std::move(u));
}

template <class Fn>
Field sample_2d(const Grid2D& g, const IsothermSpec& iso, Fn&& fn)
{
    std::vector<double> u(g.size(), 0.0);
    for (int j = 1; j <= g.cells(); ++j)
        for (int i = 1; i <= g.cells(); ++i) u[g.index(i, j)] = fn(g.center(i), g.center(j));
    return make_field(iso, std::move(u));
}

void check_size(std::size_t expected, const Field& a, const Field& b)
{
    if (a.u.size() != expected || b.u.size() != expected)
        throw ValidationError({"field size does not match the grid"});
}

} // namespace

double gauss4_1d(double x)
{
    constexpr double pi = std::numbers::pi;
    const auto sq = [](double d) { return d * d; };
    return std::exp(-10.0 * sq(x + pi / 2)) + 0.5 * std::exp(-2.0 * sq(x - pi / 2))
         + std::exp(-10.0 * sq(x - 2 * pi)) + std::exp(-10.0 * sq(x - 3 * pi));
}

double gauss4_2d(double x, double y)
{
    const auto bump = [&](double cx, double cy) {
        return std::exp(-50.0 * ((x - cx) * (x - cx) + (y - cy) * (y - cy)));
    };
    return bump(0.5, -0.5) + bump(0.5, 0.5) + bump(-0.5, -0.5) + bump(-0.5, 0.5);
}

Field ic_step_1d(const Grid1D& g, const IsothermSpec& iso)
{
    return sample_1d(g, iso, [](double x) { return (x > 0.0 && x < 1.0) ? 1.0 : 0.0; });
}

Field ic_gauss4_1d(const Grid1D& g, const IsothermSpec& iso)
{
    return sample_1d(g, iso, gauss4_1d);
}

Field ic_gauss4_2d(const Grid2D& g, const IsothermSpec& iso)
{
    return sample_2d(g, iso, gauss4_2d);
}

Field ic_constant_1d(const Grid1D& g, const IsothermSpec& iso, double value)
{
    return sample_1d(g, iso, [value](double) { return value; });
}

Field ic_constant_2d(const Grid2D& g, const IsothermSpec& iso, double value)
{
    return sample_2d(g, iso, [value](double, double) { return value; });
}

Field ic_exact_step(const Grid1D& g, const StepRiemannSolution& exact, double t)
{
    const NewtonConfig ncfg;
    Field f{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    for (int i = 1; i <= g.cells(); ++i) {
        const std::size_t k = g.index(i);
        f.q[k] = exact.cell_average_q(g.edge(i - 1), g.edge(i), t);
        f.u[k] = isotherm_invert(exact.isotherm(), f.q[k], ncfg);
    }
    return f;
}

double l1_error(const Grid1D& g, const Field& num, const Field& ref)
{
    check_size(g.size(), num, ref);
    const std::size_t first = g.index(1);
    return g.h() * simd::kernels().l1_diff(num.u.data() + first, ref.u.data() + first,
                                           static_cast<std::size_t>(g.cells()));
}

double l1_error(const Grid2D& g, const Field& num, const Field& ref)
{
    check_size(g.size(), num, ref);
    double s = 0.0;
    for (int j = 1; j <= g.cells(); ++j) {
        const std::size_t first = g.index(1, j);
        s += simd::kernels().l1_diff(num.u.data() + first, ref.u.data() + first,
                                     static_cast<std::size_t>(g.cells()));
    }
    return g.h() * g.h() * s;
}

double l1_error(const Grid1D& g, const Field& num, const StepRiemannSolution& exact, double t)
{
    if (num.u.size() != g.size()) throw ValidationError({"field size does not match the grid"});
    Field ref{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
    for (int i = 1; i <= g.cells(); ++i)
        ref.u[g.index(i)] = exact.cell_average_u(g.edge(i - 1), g.edge(i), t);
    return l1_error(g, num, ref);
}

double eoc(double e_coarse, double e_fine)
{
    return std::log2(e_coarse / e_fine);
}

void fill_eoc(std::vector<ConvergenceRow>& rows)
{
    for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].EOC.reset();
        if (k > 0 && rows[k - 1].E && rows[k].E && *rows[k - 1].E > 0.0 && *rows[k].E > 0.0)
            rows[k].EOC = eoc(*rows[k - 1].E, *rows[k].E);
    }
}

} // namespace sorptran
