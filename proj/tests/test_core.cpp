#include "sorptran/boundary.hpp"
#include "sorptran/errors.hpp"
#include "sorptran/grid.hpp"
#include "sorptran/isotherm.hpp"
#include "sorptran/velocity.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace sorptran;

namespace {

const double kStudyP[] = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0, 4.0};

double F_ref(double a, double p, double u) { return u + a * std::pow(u, p); }

} // namespace

TEST_CASE("isotherm F values")
{
    CHECK(isotherm_F(IsothermSpec(1.0, 0.5), 0.0) == 0.0);
    CHECK(isotherm_F(IsothermSpec(1.0, 0.5), 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(isotherm_F(IsothermSpec(1.0, 3.0), 0.5) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK_THROWS_AS(isotherm_F(IsothermSpec(1.0, 0.5), -1e-3), DomainError);
}

TEST_CASE("isotherm derivative uses the regularization floor")
{
    const NewtonConfig cfg;
    CHECK(isotherm_dF(IsothermSpec(1.0, 2.0), 0.5, cfg) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(isotherm_dF(IsothermSpec(1.0, 0.5), 0.0, cfg) == doctest::Approx(501.0).epsilon(1e-12));
    CHECK(isotherm_dF(IsothermSpec(1.0, 1.0), 7.0, cfg) == doctest::Approx(2.0).epsilon(1e-15));
    for (double p : kStudyP) {
        const double d = isotherm_dF(IsothermSpec(1.0, p), 0.0, cfg);
        CHECK(std::isfinite(d));
        if (p >= 1.0) CHECK(d >= 1.0);
    }
}

TEST_CASE("isotherm inversion")
{
    const NewtonConfig cfg;
    CHECK(isotherm_invert(IsothermSpec(1.0, 0.5), 0.0, cfg) == 0.0);
    CHECK(isotherm_invert(IsothermSpec(1.0, 0.5), 2.0, cfg) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(isotherm_invert(IsothermSpec(1.0, 3.0), 0.625, cfg) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(isotherm_invert(IsothermSpec(1.0, 0.5), -1.0, cfg), DomainError);
}

TEST_CASE("isotherm round trip and monotonicity over the study exponents")
{
    const NewtonConfig cfg;
    for (double p : kStudyP) {
        const IsothermSpec s(1.0, p);
        double prev = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double u = 10.0 * k / 400.0;
            const double q = isotherm_F(s, u);
            CHECK(q == doctest::Approx(F_ref(1.0, p, u)).epsilon(1e-14));
            CHECK(std::abs(isotherm_invert(s, q, cfg) - u) <= 1e-9);
            CHECK(q > prev);
            prev = q;
        }
    }
}

TEST_CASE("isotherm and Newton parameters are validated")
{
    CHECK_THROWS_AS(IsothermSpec(1.0, -1.0), ValidationError);
    CHECK_THROWS_AS(IsothermSpec(0.0, 0.5), ValidationError);
    try {
        IsothermSpec(1.0, -1.0);
    } catch (const ValidationError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].find("isotherm.p") != std::string::npos);
    }
    NewtonConfig bad;
    bad.abs_tol = 0.0;
    bad.max_iter = 0;
    bad.reg_floor = -1.0;
    try {
        bad.validate();
        FAIL("expected a ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 3);
    }
}

TEST_CASE("cell equation root satisfies F(u) + A u = B")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> A(0.0, 20.0);
    std::uniform_real_distribution<double> B(0.0, 10.0);
    const NewtonConfig cfg;
    for (double p : kStudyP) {
        const IsothermSpec s(1.0, p);
        for (int k = 0; k < 200; ++k) {
            const double a = A(rng);
            const double b = B(rng);
            const CellSolution sol = solve_cell(s, a, b, cfg, 0.5);
            REQUIRE(sol.u >= 0.0);
            const double g = F_ref(1.0, p, sol.u) + a * sol.u - b;
            CHECK(std::abs(g) <= 1e-10 * std::max(1.0, b));
        }
    }
    // Negative right-hand side continues F linearly: u (1 + A) = B.
    const CellSolution neg = solve_cell(IsothermSpec(1.0, 0.5), 1.0, -0.2, cfg, 0.0);
    CHECK(neg.u == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("grid layout has two ghost layers")
{
    const Grid1D g(0.0, 1.0, 10);
    CHECK(g.size() == 14);
    CHECK(g.index(1) == 2);
    CHECK(g.index(10) == 11);
    CHECK(g.h() == doctest::Approx(0.1));
    CHECK(g.center(1) == doctest::Approx(0.05));
    CHECK(g.edge(10) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 10), ValidationError);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), ValidationError);

    const Grid2D g2(-1.0, 1.0, 4);
    CHECK(g2.stride() == 8);
    CHECK(g2.size() == 64);
    CHECK(g2.index(1, 1) == 2 * 8 + 2);
    CHECK(g2.index(4, 1) == g2.index(1, 1) + 3);
    CHECK(g2.index(1, 2) == g2.index(1, 1) + 8);
}

TEST_CASE("velocity splitting is exact at every edge")
{
    const Grid1D g(-4.0, 11.0, 160);
    for (const auto& vel : {VelocityField1D::cosine(1.0, 1.0), VelocityField1D::constant(-0.3),
                            VelocityField1D::tabulated({0.0, 5.0}, {-1.0, 2.0})}) {
        const EdgeVelocity1D e = edge_velocity(g, vel);
        REQUIRE(e.v.size() == 161);
        for (std::size_t k = 0; k < e.v.size(); ++k) {
            CHECK(e.plus[k] + e.minus[k] == e.v[k]);
            CHECK(e.plus[k] * e.minus[k] == 0.0);
            CHECK(e.plus[k] >= 0.0);
            CHECK(e.minus[k] <= 0.0);
            CHECK(e.v[k] == vel(g.edge(static_cast<int>(k))));
        }
    }
    const Grid2D g2(-1.0, 1.0, 40);
    const EdgeVelocity2D e2 = edge_velocity(g2, VelocityField2D::rotation(2.0 * std::numbers::pi));
    for (std::size_t k = 0; k < e2.vx.size(); ++k) {
        CHECK(e2.vx_plus[k] + e2.vx_minus[k] == e2.vx[k]);
        CHECK(e2.vx_plus[k] * e2.vx_minus[k] == 0.0);
    }
    for (std::size_t k = 0; k < e2.vy.size(); ++k) {
        CHECK(e2.vy_plus[k] + e2.vy_minus[k] == e2.vy[k]);
        CHECK(e2.vy_plus[k] * e2.vy_minus[k] == 0.0);
    }
}

TEST_CASE("rotation field is discretely divergence free")
{
    for (int m : {10, 40, 160}) {
        const Grid2D g(-1.0, 1.0, m);
        const EdgeVelocity2D e = edge_velocity(g, VelocityField2D::rotation(2.0 * std::numbers::pi));
        CHECK(max_relative_divergence(e) <= 1e-13);
    }
}

TEST_CASE("Courant numbers")
{
    const Grid1D g(0.0, 1.0, 10);
    CHECK(courant_max_1d(g, VelocityField1D::constant(1.0), g.h()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(courant_max_1d(g, VelocityField1D::constant(0.0), g.h()) == 0.0);

    // tau / h = 7.5 on [-4, 11]; |cos| reaches 1 at x = 0 and 2 pi, both edges when M = 60.
    const Grid1D gc(-4.0, 11.0, 60);
    CHECK(courant_max_1d(gc, VelocityField1D::cosine(1.0, 1.0), 7.5 * gc.h()) == doctest::Approx(7.5).epsilon(1e-6));

    const Grid2D g2(-1.0, 1.0, 80);
    const double tau = 7.85 / (2.0 * std::numbers::pi) * g2.h();
    const Courant2D c = courant_max_2d(g2, VelocityField2D::rotation(2.0 * std::numbers::pi), tau);
    CHECK(c.x == doctest::Approx(c.y).epsilon(1e-14));
    // y-coordinates of x-edges stop at the outermost cell centre, so C is slightly below 7.85.
    CHECK(c.x <= 7.85);
    CHECK(c.x >= 7.85 * (1.0 - g2.h()));
    const Courant2D z = courant_max_2d(g2, VelocityField2D::constant(0.0, 0.0), tau);
    CHECK(z.x == 0.0);
    CHECK(z.y == 0.0);
    const Courant2D u = courant_max_2d(g2, VelocityField2D::constant(1.0, 0.0), g2.h());
    CHECK(u.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u.y == 0.0);
}

TEST_CASE("ghost cells follow the boundary policy")
{
    const IsothermSpec iso(1.0, 0.5);
    const Grid1D g(0.0, 1.0, 8);
    std::vector<double> u(g.size(), 0.0);
    for (int i = 1; i <= 8; ++i) u[g.index(i)] = 0.1 * i;
    Field f = make_field(iso, u);
    Boundary1D bc;
    bc.left = BoundarySide::dirichlet(0.3);
    bc.right = BoundarySide::outflow();
    fill_ghosts(g, bc, 0.0, iso, f);
    CHECK(f.u[g.index(0)] == 0.3);
    CHECK(f.u[g.index(-1)] == 0.3);
    CHECK(f.u[g.index(9)] == f.u[g.index(8)]);
    CHECK(f.u[g.index(10)] == f.u[g.index(8)]);
    CHECK(f.q[g.index(0)] == doctest::Approx(isotherm_F(iso, 0.3)));

    bc.right = BoundarySide::function([](double xl, double xr, double t) { return xl + xr + t; });
    fill_ghosts(g, bc, 2.0, iso, f);
    CHECK(f.u[g.index(9)] == doctest::Approx(1.0 + 1.125 + 2.0));
    CHECK(f.u[g.index(10)] == doctest::Approx(1.125 + 1.25 + 2.0));
}
