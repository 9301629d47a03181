#include "sorptran/errors.hpp"
#include "sorptran/experiments.hpp"
#include "sorptran/presets.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

using namespace sorptran;

namespace {

constexpr double kPi = std::numbers::pi;

/// Value of the cell whose centre is x (grid chosen so that x is a centre).
double at(const Grid1D& g, const Field& f, double x)
{
    const int i = static_cast<int>(std::lround((x - g.edge(0)) / g.h() + 0.5));
    REQUIRE(std::abs(g.center(i) - x) < 1e-12);
    return f.u[g.index(i)];
}

} // namespace

TEST_CASE("step initial condition")
{
    const IsothermSpec iso(1.0, 0.5);
    const Grid1D g(0.0, 5.0, 10);
    const Field f = ic_step_1d(g, iso);
    CHECK(at(g, f, 0.25) == 1.0);
    CHECK(at(g, f, 0.75) == 1.0);
    CHECK(at(g, f, 2.75) == 0.0);
    double mass = 0.0;
    for (int i = 1; i <= g.cells(); ++i) mass += g.h() * f.u[g.index(i)];
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.q[g.index(1)] == isotherm_F(iso, 1.0));
    // Ghosts are left for the boundary policy.
    CHECK(f.u[g.index(0)] == 0.0);
}

TEST_CASE("four Gaussians on the line")
{
    CHECK(gauss4_1d(-kPi / 2) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(gauss4_1d(kPi / 2) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(gauss4_1d(-4.0) < 1e-5);
    CHECK(gauss4_1d(2 * kPi) == doctest::Approx(1.0).epsilon(1e-6));
    const Grid1D g(-4.0, 11.0, 160);
    const Field f = ic_gauss4_1d(g, IsothermSpec(1.0, 0.25));
    for (int i = 1; i <= g.cells(); ++i) CHECK(f.u[g.index(i)] == gauss4_1d(g.center(i)));
}

TEST_CASE("four Gaussians in the plane")
{
    CHECK(gauss4_2d(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gauss4_2d(0.0, 0.0) == doctest::Approx(4.0 * std::exp(-25.0)).epsilon(1e-12));
    CHECK(gauss4_2d(0.0, 0.0) == doctest::Approx(5.6e-11).epsilon(0.01));
    const Grid2D g(-1.0, 1.0, 40);
    const Field f = ic_gauss4_2d(g, IsothermSpec(1.0, 0.5));
    const int m = g.cells();
    for (int j = 1; j <= m; ++j)
        for (int i = 1; i <= m; ++i) {
            const double u = f.u[g.index(i, j)];
            // Mirrored centres and the bump summation order agree only to rounding.
            CHECK(u == doctest::Approx(f.u[g.index(m + 1 - i, j)]).epsilon(1e-14));
            CHECK(u == doctest::Approx(f.u[g.index(i, m + 1 - j)]).epsilon(1e-14));
            CHECK(u == doctest::Approx(f.u[g.index(j, i)]).epsilon(1e-14));
        }
}

TEST_CASE("L1 error")
{
    const IsothermSpec iso(1.0, 0.5);
    const Grid1D g(0.0, 2.0, 8);
    Field a = ic_step_1d(g, iso);
    CHECK(l1_error(g, a, a) == 0.0);
    Field b = a;
    b.u[g.index(3)] += 0.3;
    CHECK(l1_error(g, b, a) == doctest::Approx(g.h() * 0.3).epsilon(1e-14));
    // Ghost cells do not count.
    b.u[g.index(0)] += 5.0;
    CHECK(l1_error(g, b, a) == doctest::Approx(g.h() * 0.3).epsilon(1e-14));

    const Grid2D g2(-1.0, 1.0, 4);
    Field c = ic_gauss4_2d(g2, iso);
    Field d = c;
    d.u[g2.index(2, 3)] -= 0.2;
    CHECK(l1_error(g2, d, c) == doctest::Approx(g2.h() * g2.h() * 0.2).epsilon(1e-14));

    const Grid1D other(0.0, 2.0, 16);
    CHECK_THROWS_AS(l1_error(other, ic_step_1d(other, iso), a), ValidationError);
}

TEST_CASE("first-order explicit error on the smooth window at M = 320")
{
    // Table value 8.01e-4 at N = 2M.
    const Run1DConfig cfg = smooth_window_config(0.5, SchemeKind::explicit1, 320, 640);
    const RunResult1D res = run_1d(cfg);
    const double e = l1_error(cfg.grid, res.final, StepRiemannSolution(cfg.iso), cfg.t_end);
    MESSAGE("E = " << e << ", ratio to 8.01e-4: " << e / 8.01e-4);
    CHECK(e <= 3.0 * 8.01e-4);
    CHECK(e >= 8.01e-4 / 3.0);
}

TEST_CASE("EOC is scale free")
{
    CHECK(eoc(4.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (double e1 : {1e-3, 0.37, 2.5}) {
        for (double s : {1e-6, 3.0, 1e5}) CHECK(eoc(s * e1, s * e1 / 1.9) == doctest::Approx(eoc(e1, e1 / 1.9)).epsilon(1e-12));
    }
    std::vector<ConvergenceRow> rows(3);
    rows[0].E = 1e-2;
    rows[1].E = 5e-3;
    rows[2].E = std::nullopt;
    fill_eoc(rows);
    CHECK_FALSE(rows[0].EOC.has_value());
    REQUIRE(rows[1].EOC.has_value());
    CHECK(*rows[1].EOC == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(rows[2].EOC.has_value());
}

TEST_CASE("first-order error halves with h on the smooth window")
{
    // N = M (Table 1) and N = M / 20 (Table 2).
    for (int divisor : {-1, 20}) {
        CAPTURE(divisor);
        double prev = 0.0;
        for (int m : {320, 640}) {
            const int n = divisor < 0 ? m : m / divisor;
            const Run1DConfig cfg = smooth_window_config(0.5, SchemeKind::implicit1, m, n);
            const double e = l1_error(cfg.grid, run_1d(cfg).final, StepRiemannSolution(cfg.iso), cfg.t_end);
            if (prev > 0.0) {
                CHECK(prev / e >= 1.7);
                CHECK(prev / e <= 2.3);
            }
            prev = e;
        }
    }
}

TEST_CASE("run time grows with M N")
{
    double prev = 0.0;
    for (int m : {320, 640, 1280}) {
        const RunResult1D res = run_1d(smooth_window_config(0.5, SchemeKind::implicit1, m, m));
        CHECK(res.wall_seconds > prev);
        prev = res.wall_seconds;
    }
}

TEST_CASE("preset catalogue")
{
    const auto names = preset_names();
    const char* expected[] = {"table1-smooth", "table2-cmax10", "table3-step", "table4-step", "table5-step",
                              "fig4-blowup", "cos-velocity", "rotation-2d", "exact-profiles"};
    REQUIRE(names.size() == std::size(expected));
    for (std::size_t k = 0; k < names.size(); ++k) {
        CHECK(names[k] == expected[k]);
        CHECK(has_preset(names[k]));
        CHECK_FALSE(preset_summary(names[k]).empty());
    }
    CHECK_FALSE(has_preset("table6"));
    CHECK_THROWS_AS(run_preset("table6", PresetOptions{}), ValidationError);
}

TEST_CASE("every preset runs its smallest rung within 60 s")
{
    PresetOptions opt;
    opt.write_artifacts = false;
    opt.max_rungs = 1;
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto start = std::chrono::steady_clock::now();
        const PresetReport r = run_preset(name, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        MESSAGE(name << ": " << secs << " s, " << r.checks.size() << " checks");
        CHECK(secs < 60.0);
        CHECK_FALSE((r.ladders.empty() && r.checks.empty()));
        for (const auto& l : r.ladders)
            for (const auto& s : l.stats) CHECK_FALSE(s.failure.has_value());
    }
}

TEST_CASE("ladders refine by doubling M")
{
    PresetOptions opt;
    opt.write_artifacts = false;
    opt.max_rungs = 2;
    const PresetReport r = run_preset("table3-step", opt);
    REQUIRE_FALSE(r.ladders.empty());
    for (const auto& l : r.ladders) {
        REQUIRE(l.rows.size() == 2);
        CHECK(l.rows[1].M == 2 * l.rows[0].M);
        CHECK(l.rows[1].N == 2 * l.rows[0].N);
        CHECK_FALSE(l.rows[0].EOC.has_value());
        CHECK(l.rows[1].EOC.has_value());
    }
}
