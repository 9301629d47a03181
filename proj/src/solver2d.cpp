#include "sorptran/solver2d.hpp"

#include "sorptran/errors.hpp"
#include "sorptran/simd/kernels.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>

namespace sorptran {

namespace {

constexpr double kClampTol = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline double max_nan(double acc, double d)
{
    return (d <= acc) ? acc : d;
}

// Face values along one axis; s is the storage stride of that axis.
inline double face_plus(const double* u, const double* uo, const LimiterState* c, std::size_t k, std::size_t s)
{
    if (c == nullptr) return u[k];
    const double l = c->l_plus[k];
    const double w = c->w_plus[k];
    return u[k] - 0.5 * l * (w * (u[k - s] - uo[k]) + (1.0 - w) * (u[k] - uo[k + s]));
}

inline double face_minus(const double* u, const double* uo, const LimiterState* c, std::size_t k, std::size_t s)
{
    if (c == nullptr) return u[k];
    const double l = c->l_minus[k];
    const double w = c->w_minus[k];
    return u[k] - 0.5 * l * (w * (u[k + s] - uo[k]) + (1.0 - w) * (u[k] - uo[k - s]));
}

// Contribution of one axis to A and to the bracket subtracted from B.
struct AxisTerms {
    double a;
    double b;
};

inline AxisTerms axis_terms(const double* u, const double* uo, const LimiterState* c, std::size_t k,
                            std::size_t s, double vpR, double vmR, double vpL, double vmL)
{
    if (c == nullptr) return {vpR - vmL, vmR * u[k + s] - vpL * u[k - s]};
    const double lp = c->l_plus[k];
    const double wp = c->w_plus[k];
    const double lm = c->l_minus[k];
    const double wm = c->w_minus[k];
    const double cR = 1.0 - 0.5 * lp * (1.0 - wp);
    const double cL = 1.0 - 0.5 * lm * (1.0 - wm);
    const double dR = -0.5 * lp * (wp * (u[k - s] - uo[k]) - (1.0 - wp) * uo[k + s]);
    const double dL = -0.5 * lm * (wm * (u[k + s] - uo[k]) - (1.0 - wm) * uo[k - s]);
    return {vpR * cR - vmL * cL,
            vpR * dR + vmR * face_minus(u, uo, c, k + s, s) - vpL * face_plus(u, uo, c, k - s, s) - vmL * dL};
}

// Outflow face value of cell k along one axis if U_k were uk, checked against its stencil envelope.
inline bool face_inside(const double* u, const double* uo, double l, double w, std::size_t k, std::ptrdiff_t s,
                        double uk)
{
    constexpr double tol = 1e-12;
    const double up = u[static_cast<std::ptrdiff_t>(k) - s];
    const double down = uo[static_cast<std::ptrdiff_t>(k) + s];
    const double f = uk - 0.5 * l * (w * (up - uo[k]) + (1.0 - w) * (uk - down));
    return f >= std::min({up, uk, uo[k], down}) - tol && f <= std::max({up, uk, uo[k], down}) + tol;
}

struct Sweeper2D {
    const Problem2D& p;
    const Field& old;
    Field& next;
    LimiterState2D* coef;
    const LimiterState2D* base;  ///< unscaled coefficients; every visit restarts from them
    double r;
    bool bounded = false;
    int bisections = 0;

    struct Edges {
        std::size_t xr, xl, yn, ys;
    };

    Edges edges_of(int i, int j) const
    {
        const auto& e = p.edges;
        return {e.xe(i, j), e.xe(i - 1, j), e.ye(i, j), e.ye(i, j - 1)};
    }

    double cell_solve(std::size_t k, const Edges& ed, const NewtonConfig& ncfg, long& iters) const
    {
        const auto& e = p.edges;
        const std::size_t sy = p.grid.stride();
        const double* u = next.u.data();
        const double* uo = old.u.data();
        const AxisTerms tx = axis_terms(u, uo, coef ? &coef->x : nullptr, k, 1, e.vx_plus[ed.xr],
                                        e.vx_minus[ed.xr], e.vx_plus[ed.xl], e.vx_minus[ed.xl]);
        const AxisTerms ty = axis_terms(u, uo, coef ? &coef->y : nullptr, k, sy, e.vy_plus[ed.yn],
                                        e.vy_minus[ed.yn], e.vy_plus[ed.ys], e.vy_minus[ed.ys]);
        const double A = r * (tx.a + ty.a);
        const double B = old.q[k] - r * (tx.b + ty.b);
        const CellSolution s = solve_cell(p.iso, A, B, ncfg, u[k]);
        iters += s.iterations;
        return s.u;
    }

    struct Range {
        double lo;
        double hi;
        void add(double v)
        {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };

    Range inflow_range(std::size_t k, const Edges& ed) const
    {
        const auto& e = p.edges;
        const std::size_t sy = p.grid.stride();
        const double* u = next.u.data();
        const double* uo = old.u.data();
        Range b{uo[k], uo[k]};
        if (e.vx_plus[ed.xl] > 0.0) {
            b.add(u[k - 1]);
            b.add(face_plus(u, uo, &coef->x, k - 1, 1));
        }
        if (e.vx_minus[ed.xr] < 0.0) {
            b.add(u[k + 1]);
            b.add(face_minus(u, uo, &coef->x, k + 1, 1));
        }
        if (e.vy_plus[ed.ys] > 0.0) {
            b.add(u[k - sy]);
            b.add(face_plus(u, uo, &coef->y, k - sy, sy));
        }
        if (e.vy_minus[ed.yn] < 0.0) {
            b.add(u[k + sy]);
            b.add(face_minus(u, uo, &coef->y, k + sy, sy));
        }
        return b;
    }

    bool admissible(std::size_t k, const Edges& ed, double uk, const Range& b) const
    {
        constexpr double tol = 1e-12;
        if (uk < b.lo - tol || uk > b.hi + tol) return false;
        const auto& e = p.edges;
        const auto sy = static_cast<std::ptrdiff_t>(p.grid.stride());
        const double* u = next.u.data();
        const double* uo = old.u.data();
        const LimiterState& cx = coef->x;
        const LimiterState& cy = coef->y;
        if (e.vx_plus[ed.xr] > 0.0 && !face_inside(u, uo, cx.l_plus[k], cx.w_plus[k], k, 1, uk)) return false;
        if (e.vx_minus[ed.xl] < 0.0 && !face_inside(u, uo, cx.l_minus[k], cx.w_minus[k], k, -1, uk)) return false;
        if (e.vy_plus[ed.yn] > 0.0 && !face_inside(u, uo, cy.l_plus[k], cy.w_plus[k], k, sy, uk)) return false;
        if (e.vy_minus[ed.ys] < 0.0 && !face_inside(u, uo, cy.l_minus[k], cy.w_minus[k], k, -sy, uk))
            return false;
        return true;
    }

    double bounded_solve(std::size_t k, const Edges& ed, const NewtonConfig& ncfg, long& iters) const
    {
        const std::array<double, 4> l0{base->x.l_plus[k], base->x.l_minus[k], base->y.l_plus[k],
                                       base->y.l_minus[k]};
        const auto scale = [&](double theta) {
            coef->x.l_plus[k] = theta * l0[0];
            coef->x.l_minus[k] = theta * l0[1];
            coef->y.l_plus[k] = theta * l0[2];
            coef->y.l_minus[k] = theta * l0[3];
        };
        scale(1.0);
        const double uk = cell_solve(k, ed, ncfg, iters);
        Range b = inflow_range(k, ed);
        if (admissible(k, ed, uk, b)) return uk;
        scale(0.0);
        const double u0 = cell_solve(k, ed, ncfg, iters);
        b.add(u0);
        scale(1.0);
        if (admissible(k, ed, uk, b)) return uk;
        double lo = 0.0;
        double hi = 1.0;
        double best = u0;
        for (int it = 0; it < bisections; ++it) {
            const double mid = 0.5 * (lo + hi);
            scale(mid);
            const double um = cell_solve(k, ed, ncfg, iters);
            if (admissible(k, ed, um, b)) {
                lo = mid;
                best = um;
            } else {
                hi = mid;
            }
        }
        scale(lo);
        return best;
    }

    double solve_at(int i, int j, const NewtonConfig& ncfg, long& iters)
    {
        const std::size_t k = p.grid.index(i, j);
        const Edges ed = edges_of(i, j);
        const double un = (bounded && coef != nullptr) ? bounded_solve(k, ed, ncfg, iters)
                                                       : cell_solve(k, ed, ncfg, iters);
        const double change = std::abs(un - next.u[k]);
        next.u[k] = un;
        next.q[k] = p.iso.eval_extended(un);
        return change;
    }

    int run(const SchemeConfig& cfg, long& iters)
    {
        const int m = p.grid.cells();
        double change = 0.0;
        for (int round = 0; round < cfg.max_sweeps; ++round) {
            change = 0.0;
            for (int order = 0; order < 4; ++order) {
                const bool i_up = order == 0 || order == 3;
                const bool j_up = order < 2;
                for (int jj = 1; jj <= m; ++jj) {
                    const int j = j_up ? jj : m + 1 - jj;
                    for (int ii = 1; ii <= m; ++ii) {
                        const int i = i_up ? ii : m + 1 - ii;
                        change = max_nan(change, solve_at(i, j, cfg.newton, iters));
                    }
                }
                refresh_outflow(p.grid, p.bc, p.iso, next);
            }
            if (change < cfg.sweep_tol) return 4 * (round + 1);
        }
        throw SolverError("2D fast sweeping did not converge in " + std::to_string(cfg.max_sweeps) + " rounds",
                          change, change);
    }
};

int clamp_range(const Grid2D& g, const IsothermSpec& iso, Field& f)
{
    int bad = 0;
    for (int j = 1; j <= g.cells(); ++j) {
        for (int i = 1; i <= g.cells(); ++i) {
            const std::size_t k = g.index(i, j);
            if (f.u[k] < 0.0) {
                if (f.u[k] > -kClampTol) {
                    f.u[k] = 0.0;
                    f.q[k] = iso.eval_extended(0.0);
                } else {
                    ++bad;
                }
            }
        }
    }
    return bad;
}

double axis_envelope(const double* u, const double* uo, const LimiterState& c, std::size_t kl, std::size_t s,
                     double vp, double vm)
{
    double worst = 0.0;
    if (vp > 0.0) {
        const std::size_t k = kl;
        const double val = face_plus(u, uo, &c, k, s);
        const double lo = std::min({u[k - s], u[k], uo[k], uo[k + s]});
        const double hi = std::max({u[k - s], u[k], uo[k], uo[k + s]});
        worst = std::max({worst, lo - val, val - hi});
    }
    if (vm < 0.0) {
        const std::size_t k = kl + s;
        const double val = face_minus(u, uo, &c, k, s);
        const double lo = std::min({u[k + s], u[k], uo[k], uo[k - s]});
        const double hi = std::max({u[k + s], u[k], uo[k], uo[k - s]});
        worst = std::max({worst, lo - val, val - hi});
    }
    return worst;
}

double envelope_check(const Problem2D& p, const Field& old, const Field& next, const LimiterState2D& c)
{
    const Grid2D& g = p.grid;
    const auto& e = p.edges;
    const int m = g.cells();
    const double* u = next.u.data();
    const double* uo = old.u.data();
    double worst = 0.0;
    for (int j = 1; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            worst = std::max(worst, axis_envelope(u, uo, c.x, g.index(i, j), 1, e.vx_plus[e.xe(i, j)],
                                                  e.vx_minus[e.xe(i, j)]));
    for (int j = 0; j <= m; ++j)
        for (int i = 1; i <= m; ++i)
            worst = std::max(worst, axis_envelope(u, uo, c.y, g.index(i, j), g.stride(), e.vy_plus[e.ye(i, j)],
                                                  e.vy_minus[e.ye(i, j)]));
    return worst;
}

void boundary_fluxes(const Problem2D& p, const Field& old, const Field& next, const LimiterState2D* c,
                     double tau, StepDiagnostics& d)
{
    const Grid2D& g = p.grid;
    const auto& e = p.edges;
    const int m = g.cells();
    const std::size_t sy = g.stride();
    const double* u = next.u.data();
    const double* uo = old.u.data();
    const LimiterState* cx = c ? &c->x : nullptr;
    const LimiterState* cy = c ? &c->y : nullptr;
    const auto fx = [&](int i, int j) {
        const std::size_t ed = e.xe(i, j);
        return e.vx_plus[ed] * face_plus(u, uo, cx, g.index(i, j), 1)
             + e.vx_minus[ed] * face_minus(u, uo, cx, g.index(i + 1, j), 1);
    };
    const auto fy = [&](int i, int j) {
        const std::size_t ed = e.ye(i, j);
        return e.vy_plus[ed] * face_plus(u, uo, cy, g.index(i, j), sy)
             + e.vy_minus[ed] * face_minus(u, uo, cy, g.index(i, j + 1), sy);
    };
    double in = 0.0;
    double out = 0.0;
    for (int k = 1; k <= m; ++k) {
        in += fx(0, k) + fy(k, 0);
        out += fx(m, k) + fy(k, m);
    }
    d.flux_left = tau * g.h() * in;
    d.flux_right = tau * g.h() * out;
}

void finish(const Problem2D& p, const Field& old, const Field& next, StepDiagnostics& d)
{
    const Grid2D& g = p.grid;
    const auto& kt = simd::kernels();
    const auto m = static_cast<std::size_t>(g.cells());
    double sum_old = 0.0;
    double sum_new = 0.0;
    double sum_u = 0.0;
    double lo = next.u[g.index(1, 1)];
    double hi = lo;
    for (int j = 1; j <= g.cells(); ++j) {
        const std::size_t k = g.index(1, j);
        sum_old += kt.sum(old.q.data() + k, m);
        sum_new += kt.sum(next.q.data() + k, m);
        sum_u += kt.sum(next.u.data() + k, m);
        double rlo = 0.0;
        double rhi = 0.0;
        kt.min_max(next.u.data() + k, m, &rlo, &rhi);
        lo = std::min(lo, rlo);
        hi = std::max(hi, rhi);
    }
    const double h2 = g.h() * g.h();
    d.mass_before = h2 * sum_old;
    d.mass_after = h2 * sum_new;
    d.mass_residual = sum_new - sum_old + (d.flux_right - d.flux_left) / h2;
    d.u_min = lo;
    d.u_max = hi;
    d.finite = std::isfinite(sum_u) && std::isfinite(sum_new);
}

StepResult2D implicit_step(const Problem2D& p, const Field& current, double t, double tau,
                           const SchemeConfig& cfg, const LimiterState2D* coef, const Field* guess,
                           bool bounded = false)
{
    const auto t0 = Clock::now();
    StepResult2D out;
    out.field = guess != nullptr ? *guess : current;
    fill_ghosts(p.grid, p.bc, t + tau, p.iso, out.field);
    std::optional<LimiterState2D> own;
    if (coef != nullptr) own = *coef;
    Sweeper2D sw{p, current, out.field, own ? &*own : nullptr, coef, tau / p.grid.h(), bounded,
                 cfg.bound_bisections};
    out.diag.sweeps_used = sw.run(cfg, out.diag.newton_iters_total);
    out.diag.range_violations = clamp_range(p.grid, p.iso, out.field);
    refresh_outflow(p.grid, p.bc, p.iso, out.field);
    const LimiterState2D* used = own ? &*own : nullptr;
    boundary_fluxes(p, current, out.field, used, tau, out.diag);
    if (used != nullptr) {
        out.diag.envelope_violation = envelope_check(p, current, out.field, *used);
        out.limiter = *used;
    }
    finish(p, current, out.field, out.diag);
    out.diag.wall_time = seconds_since(t0);
    return out;
}

void zero_limiter(LimiterState& c)
{
    std::fill(c.l_plus.begin(), c.l_plus.end(), 0.0);
    std::fill(c.l_minus.begin(), c.l_minus.end(), 0.0);
}

} // namespace

Problem2D::Problem2D(Grid2D g, const VelocityField2D& vel, IsothermSpec s, Boundary2D b)
    : grid(g), edges(edge_velocity(g, vel)), iso(s), bc(std::move(b))
{
    for (const BoundarySide* side : {&bc.west, &bc.east, &bc.south, &bc.north})
        if (side->kind == BoundarySide::Kind::function)
            throw ValidationError({"2D boundaries support only dirichlet and outflow"});
}

LimiterState2D compute_limiter_2d(const Grid2D& g, const Field& pred, const Field& old, double eps)
{
    LimiterState2D c;
    c.x.resize(g.size());
    c.y.resize(g.size());
    const auto& kt = simd::kernels();
    const int m = g.cells();
    const auto run = [&](LimiterState& s, std::size_t first, std::ptrdiff_t stride, std::size_t n) {
        simd::LimiterArgs a{pred.u.data() + first,  old.u.data() + first,  stride,
                            eps,
                            s.w_plus.data() + first, s.w_minus.data() + first,
                            s.l_plus.data() + first, s.l_minus.data() + first,
                            n};
        kt.weno_limiter(a);
    };
    for (int j = 1; j <= m; ++j) run(c.x, g.index(0, j), 1, static_cast<std::size_t>(m + 2));
    for (int j = 0; j <= m + 1; ++j)
        run(c.y, g.index(1, j), static_cast<std::ptrdiff_t>(g.stride()), static_cast<std::size_t>(m));
    return c;
}

StepResult2D step_implicit1_2d(const Problem2D& p, const Field& current, double t, double tau,
                               const SchemeConfig& cfg)
{
    return implicit_step(p, current, t, tau, cfg, nullptr, nullptr);
}

StepResult2D step_limited_2d(const Problem2D& p, const Field& current, double t, double tau,
                             const SchemeConfig& cfg, const LimiterState2D& coef, const Field* guess)
{
    if (coef.x.l_plus.size() != p.grid.size() || coef.y.l_plus.size() != p.grid.size())
        throw ValidationError({"limiter state does not match the grid"});
    return implicit_step(p, current, t, tau, cfg, &coef, guess);
}

StepResult2D step_compact2_2d(const Problem2D& p, const Field& current, double t, double tau,
                              const SchemeConfig& cfg)
{
    LimiterState2D c;
    const double l = cfg.force_first_order ? 0.0 : 1.0;
    for (LimiterState* s : {&c.x, &c.y}) {
        s->resize(p.grid.size());
        std::fill(s->w_plus.begin(), s->w_plus.end(), cfg.omega);
        std::fill(s->w_minus.begin(), s->w_minus.end(), cfg.omega);
        std::fill(s->l_plus.begin(), s->l_plus.end(), l);
        std::fill(s->l_minus.begin(), s->l_minus.end(), l);
    }
    return implicit_step(p, current, t, tau, cfg, &c, nullptr);
}

StepResult2D step_hires_weno_2d(const Problem2D& p, const Field& current, double t, double tau,
                                const SchemeConfig& cfg)
{
    const auto t0 = Clock::now();
    StepResult2D pred = step_implicit1_2d(p, current, t, tau, cfg);
    StepResult2D corr;
    const Field* base = &pred.field;
    long iters = pred.diag.newton_iters_total;
    for (int pass = 0; pass < cfg.corrector_passes; ++pass) {
        LimiterState2D coef = compute_limiter_2d(p.grid, *base, current, cfg.weno_eps);
        if (cfg.force_first_order) {
            zero_limiter(coef.x);
            zero_limiter(coef.y);
        }
        StepResult2D next = implicit_step(p, current, t, tau, cfg, &coef, base,
                                          cfg.local_bounds && !cfg.force_first_order);
        iters += next.diag.newton_iters_total;
        corr = std::move(next);
        base = &corr.field;
    }
    corr.diag.predictor_sweeps = pred.diag.sweeps_used;
    corr.diag.newton_iters_total = iters;
    corr.diag.range_violations += pred.diag.range_violations;
    corr.diag.wall_time = seconds_since(t0);
    return corr;
}

StepResult2D step_2d(const Problem2D& p, const Field& current, double t, double tau, const SchemeConfig& cfg)
{
    switch (cfg.kind) {
    case SchemeKind::implicit1: return step_implicit1_2d(p, current, t, tau, cfg);
    case SchemeKind::compact2: return step_compact2_2d(p, current, t, tau, cfg);
    case SchemeKind::hires_weno: return step_hires_weno_2d(p, current, t, tau, cfg);
    default: break;
    }
    throw ValidationError({"scheme.kind " + std::string(scheme_name(cfg.kind)) + " is not available in 2D"});
}

void Run2DConfig::validate() const
{
    std::vector<std::string> bad;
    if (!(t_end > t0)) bad.emplace_back("time.t_end must exceed time.t0");
    if (steps < 0) bad.emplace_back("time.steps must be >= 0");
    if (!initial) bad.emplace_back("initial condition missing");
    if (is_explicit(scheme.kind))
        bad.emplace_back("scheme.kind " + std::string(scheme_name(scheme.kind)) + " is not available in 2D");
    try {
        scheme.validate();
    } catch (const ValidationError& e) {
        bad.insert(bad.end(), e.violations().begin(), e.violations().end());
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

RunResult2D run_2d(const Run2DConfig& cfg)
{
    cfg.validate();
    const auto t0 = Clock::now();
    const Problem2D prob(cfg.grid, cfg.velocity, cfg.iso, cfg.bc);
    const Grid2D& g = cfg.grid;
    const double h2 = g.h() * g.h();

    const auto mass = [&](const Field& f) {
        const auto& kt = simd::kernels();
        double s = 0.0;
        for (int j = 1; j <= g.cells(); ++j)
            s += kt.sum(f.q.data() + g.index(1, j), static_cast<std::size_t>(g.cells()));
        return h2 * s;
    };

    RunResult2D res;
    // steps = 0 returns the initial field with ghosts filled.
    res.tau = cfg.steps > 0 ? (cfg.t_end - cfg.t0) / cfg.steps : 0.0;
    res.c_max = courant_max_2d(g, cfg.velocity, res.tau);

    Field field = cfg.initial(g, cfg.iso);
    if (field.u.size() != g.size() || field.q.size() != g.size())
        throw ValidationError({"initial condition has the wrong size"});
    fill_ghosts(g, cfg.bc, cfg.t0, cfg.iso, field);
    res.initial = field;
    res.ledger.initial_mass = mass(field);

    for (int n = 0; n < cfg.steps; ++n) {
        const double t = cfg.t0 + n * res.tau;
        StepResult2D s = step_2d(prob, field, t, res.tau, cfg.scheme);
        res.ledger.boundary_net += s.diag.flux_right - s.diag.flux_left;
        res.ledger.max_step_residual = std::max(res.ledger.max_step_residual, std::abs(s.diag.mass_residual));
        res.newton_iters_total += s.diag.newton_iters_total;
        res.max_sweeps_used = std::max(res.max_sweeps_used, s.diag.sweeps_used);
        res.max_envelope_violation = std::max(res.max_envelope_violation, s.diag.envelope_violation);
        res.range_violations += s.diag.range_violations;
        const bool finite = s.diag.finite;
        if (cfg.keep_step_diagnostics) res.steps.push_back(s.diag);
        field = std::move(s.field);
        ++res.steps_taken;
        if (!finite) {
            res.status = RunStatus::unstable;
            break;
        }
    }

    res.ledger.final_mass = mass(field);
    res.ledger.drift = res.ledger.final_mass - res.ledger.initial_mass + res.ledger.boundary_net;
    const double scale = std::max(std::abs(res.ledger.initial_mass), std::abs(res.ledger.final_mass));
    res.ledger.relative_drift = scale > 0.0 ? std::abs(res.ledger.drift) / scale : std::abs(res.ledger.drift);
    res.final = std::move(field);
    res.wall_seconds = seconds_since(t0);
    return res;
}

} // namespace sorptran
