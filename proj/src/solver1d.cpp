#include "sorptran/solver1d.hpp"

#include "sorptran/errors.hpp"
#include "sorptran/simd/kernels.hpp"

#include <algorithm>
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
    // NaN propagates so that a poisoned sweep never looks converged.
    return (d <= acc) ? acc : d;
}

struct Sweeper1D {
    const Problem1D& p;
    const Field& old;
    Field& next;
    LimiterState* coef;
    const LimiterState* base;  ///< unscaled coefficients; every visit restarts from them
    double r;
    bool bounded = false;
    int bisections = 0;

    double cell_solve(std::size_t k, int i, const NewtonConfig& ncfg, long& iters) const
    {
        const auto& e = p.edges;
        const double vpR = e.plus[static_cast<std::size_t>(i)];
        const double vmR = e.minus[static_cast<std::size_t>(i)];
        const double vpL = e.plus[static_cast<std::size_t>(i - 1)];
        const double vmL = e.minus[static_cast<std::size_t>(i - 1)];
        const double* u = next.u.data();
        const double* uo = old.u.data();

        double A = 0.0;
        double B = 0.0;
        if (coef == nullptr) {
            A = r * (vpR - vmL);
            B = old.q[k] + r * (vpL * u[k - 1] - vmR * u[k + 1]);
        } else {
            const double lp = coef->l_plus[k];
            const double wp = coef->w_plus[k];
            const double lm = coef->l_minus[k];
            const double wm = coef->w_minus[k];
            const double cR = 1.0 - 0.5 * lp * (1.0 - wp);
            const double cL = 1.0 - 0.5 * lm * (1.0 - wm);
            const double dR = -0.5 * lp * (wp * (u[k - 1] - uo[k]) - (1.0 - wp) * uo[k + 1]);
            const double dL = -0.5 * lm * (wm * (u[k + 1] - uo[k]) - (1.0 - wm) * uo[k - 1]);
            A = r * (vpR * cR - vmL * cL);
            B = old.q[k] - r * (vpR * dR + vmR * face_minus(next, old, coef, k + 1)
                                - vpL * face_plus(next, old, coef, k - 1) - vmL * dL);
        }
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

    /// Range spanned by U^n and the values flowing into cell k.
    Range inflow_range(std::size_t k, int i) const
    {
        const auto& e = p.edges;
        Range b{old.u[k], old.u[k]};
        if (e.plus[static_cast<std::size_t>(i - 1)] > 0.0) {
            b.add(next.u[k - 1]);
            b.add(face_plus(next, old, coef, k - 1));
        }
        if (e.minus[static_cast<std::size_t>(i)] < 0.0) {
            b.add(next.u[k + 1]);
            b.add(face_minus(next, old, coef, k + 1));
        }
        return b;
    }

    /// Candidate value uk inside the range and its outflow faces inside their stencil envelopes.
    bool admissible(std::size_t k, int i, double uk, const Range& b) const
    {
        constexpr double tol = 1e-12;
        if (uk < b.lo - tol || uk > b.hi + tol) return false;
        const auto& e = p.edges;
        const double* u = next.u.data();
        const double* uo = old.u.data();
        if (e.plus[static_cast<std::size_t>(i)] > 0.0) {
            const double l = coef->l_plus[k];
            const double w = coef->w_plus[k];
            const double f = uk - 0.5 * l * (w * (u[k - 1] - uo[k]) + (1.0 - w) * (uk - uo[k + 1]));
            if (f < std::min({u[k - 1], uk, uo[k], uo[k + 1]}) - tol) return false;
            if (f > std::max({u[k - 1], uk, uo[k], uo[k + 1]}) + tol) return false;
        }
        if (e.minus[static_cast<std::size_t>(i - 1)] < 0.0) {
            const double l = coef->l_minus[k];
            const double w = coef->w_minus[k];
            const double f = uk - 0.5 * l * (w * (u[k + 1] - uo[k]) + (1.0 - w) * (uk - uo[k - 1]));
            if (f < std::min({u[k + 1], uk, uo[k], uo[k - 1]}) - tol) return false;
            if (f > std::max({u[k + 1], uk, uo[k], uo[k - 1]}) + tol) return false;
        }
        return true;
    }

    void scale_own(std::size_t k, double lp0, double lm0, double theta) const
    {
        coef->l_plus[k] = theta * lp0;
        coef->l_minus[k] = theta * lm0;
    }

    /// Shrinks the outflow limiters of cell k until its solution is admissible.
    /// l = 0 is always admissible once its own value joins the range.
    double bounded_solve(std::size_t k, int i, const NewtonConfig& ncfg, long& iters) const
    {
        const double lp0 = base->l_plus[k];
        const double lm0 = base->l_minus[k];
        scale_own(k, lp0, lm0, 1.0);
        double uk = cell_solve(k, i, ncfg, iters);
        Range b = inflow_range(k, i);
        if (admissible(k, i, uk, b)) return uk;
        scale_own(k, lp0, lm0, 0.0);
        const double u0 = cell_solve(k, i, ncfg, iters);
        b.add(u0);
        scale_own(k, lp0, lm0, 1.0);
        if (admissible(k, i, uk, b)) return uk;
        double lo = 0.0;
        double hi = 1.0;
        double best = u0;
        for (int it = 0; it < bisections; ++it) {
            const double mid = 0.5 * (lo + hi);
            scale_own(k, lp0, lm0, mid);
            const double um = cell_solve(k, i, ncfg, iters);
            if (admissible(k, i, um, b)) {
                lo = mid;
                best = um;
            } else {
                hi = mid;
            }
        }
        scale_own(k, lp0, lm0, lo);
        return best;
    }

    double solve_at(int i, const NewtonConfig& ncfg, long& iters)
    {
        const std::size_t k = p.grid.index(i);
        const double un = (bounded && coef != nullptr) ? bounded_solve(k, i, ncfg, iters)
                                                       : cell_solve(k, i, ncfg, iters);
        const double change = std::abs(un - next.u[k]);
        next.u[k] = un;
        next.q[k] = p.iso.eval_extended(un);
        return change;
    }

    int run(const SchemeConfig& cfg, long& iters)
    {
        const int m = p.grid.cells();
        const bool any_positive =
            std::any_of(p.edges.plus.begin(), p.edges.plus.end(), [](double v) { return v > 0.0; });
        double change = 0.0;
        for (int s = 0; s < cfg.max_sweeps; ++s) {
            const bool forward = any_positive == (s % 2 == 0);
            change = 0.0;
            if (forward) {
                for (int i = 1; i <= m; ++i) change = max_nan(change, solve_at(i, cfg.newton, iters));
            } else {
                for (int i = m; i >= 1; --i) change = max_nan(change, solve_at(i, cfg.newton, iters));
            }
            refresh_outflow(p.grid, p.bc, p.iso, next);
            if (change < cfg.sweep_tol) return s + 1;
        }
        throw SolverError("fast sweeping did not converge in " + std::to_string(cfg.max_sweeps) + " sweeps",
                          change, change);
    }
};

int clamp_range(const Grid1D& g, const IsothermSpec& iso, Field& f)
{
    int bad = 0;
    for (int i = 1; i <= g.cells(); ++i) {
        const std::size_t k = g.index(i);
        if (f.u[k] < 0.0) {
            if (f.u[k] > -kClampTol) {
                f.u[k] = 0.0;
                f.q[k] = iso.eval_extended(0.0);
            } else {
                ++bad;
            }
        }
    }
    return bad;
}

void envelope_check(const Problem1D& p, const Field& old, const Field& next, const LimiterState& coef,
                    StepDiagnostics& d)
{
    const double* u = next.u.data();
    const double* uo = old.u.data();
    double worst = 0.0;
    for (int e = 0; e <= p.grid.cells(); ++e) {
        const auto ei = static_cast<std::size_t>(e);
        if (p.edges.plus[ei] > 0.0) {
            const std::size_t k = p.grid.index(e);
            const double val = face_plus(next, old, &coef, k);
            const double lo = std::min({u[k - 1], u[k], uo[k], uo[k + 1]});
            const double hi = std::max({u[k - 1], u[k], uo[k], uo[k + 1]});
            worst = std::max({worst, lo - val, val - hi});
        }
        if (p.edges.minus[ei] < 0.0) {
            const std::size_t k = p.grid.index(e + 1);
            const double val = face_minus(next, old, &coef, k);
            const double lo = std::min({u[k + 1], u[k], uo[k], uo[k - 1]});
            const double hi = std::max({u[k + 1], u[k], uo[k], uo[k - 1]});
            worst = std::max({worst, lo - val, val - hi});
        }
    }
    d.envelope_violation = worst;
}

/// Fills the mass bookkeeping and range statistics once the new field is final.
void finish(const Problem1D& p, const Field& old, const Field& next, double tau, StepDiagnostics& d)
{
    const auto& kt = simd::kernels();
    const Grid1D& g = p.grid;
    const std::size_t first = g.index(1);
    const auto m = static_cast<std::size_t>(g.cells());
    const double sum_old = kt.sum(old.q.data() + first, m);
    const double sum_new = kt.sum(next.q.data() + first, m);
    d.mass_before = g.h() * sum_old;
    d.mass_after = g.h() * sum_new;
    d.mass_residual = sum_new - sum_old + (d.flux_right - d.flux_left) / g.h();
    kt.min_max(next.u.data() + first, m, &d.u_min, &d.u_max);
    d.finite = std::isfinite(kt.sum(next.u.data() + first, m)) && std::isfinite(sum_new);
    (void)tau;
}

void boundary_fluxes(const Problem1D& p, const Field& old, const Field& next, const LimiterState* coef,
                     double tau, StepDiagnostics& d)
{
    const Grid1D& g = p.grid;
    const auto m = static_cast<std::size_t>(g.cells());
    const auto& e = p.edges;
    d.flux_left = tau * (e.plus[0] * face_plus(next, old, coef, g.index(0))
                         + e.minus[0] * face_minus(next, old, coef, g.index(1)));
    d.flux_right = tau * (e.plus[m] * face_plus(next, old, coef, g.index(g.cells()))
                          + e.minus[m] * face_minus(next, old, coef, g.index(g.cells() + 1)));
}

StepResult1D implicit_step(const Problem1D& p, const Field& current, double t, double tau,
                           const SchemeConfig& cfg, const LimiterState* coef, const Field* guess,
                           bool bounded = false)
{
    const auto t0 = Clock::now();
    StepResult1D out;
    out.field = guess != nullptr ? *guess : current;
    fill_ghosts(p.grid, p.bc, t + tau, p.iso, out.field);
    std::optional<LimiterState> own;
    if (coef != nullptr) own = *coef;
    Sweeper1D sw{p, current, out.field, own ? &*own : nullptr, coef, tau / p.grid.h(), bounded,
                 cfg.bound_bisections};
    out.diag.sweeps_used = sw.run(cfg, out.diag.newton_iters_total);
    out.diag.range_violations = clamp_range(p.grid, p.iso, out.field);
    refresh_outflow(p.grid, p.bc, p.iso, out.field);
    const LimiterState* used = own ? &*own : nullptr;
    boundary_fluxes(p, current, out.field, used, tau, out.diag);
    if (used != nullptr) {
        envelope_check(p, current, out.field, *used, out.diag);
        out.limiter = *used;
    }
    finish(p, current, out.field, tau, out.diag);
    out.diag.wall_time = seconds_since(t0);
    return out;
}

/// Recovers u from conserved q cell by cell. A failed inversion marks the step non-finite.
void invert_interior(const Problem1D& p, const std::vector<double>& q, Field& f, const NewtonConfig& ncfg,
                     StepDiagnostics& d)
{
    for (int i = 1; i <= p.grid.cells(); ++i) {
        const std::size_t k = p.grid.index(i);
        try {
            const CellSolution s = solve_cell(p.iso, 0.0, q[k], ncfg, f.u[k]);
            d.newton_iters_total += s.iterations;
            f.u[k] = s.u;
        } catch (const SolverError& e) {
            f.u[k] = e.last_iterate();
            d.finite = false;
        }
        f.q[k] = p.iso.eval_extended(f.u[k]);
    }
}

} // namespace

Problem1D::Problem1D(Grid1D g, const VelocityField1D& vel, IsothermSpec s, Boundary1D b)
    : grid(g), edges(edge_velocity(g, vel)), iso(s), bc(std::move(b))
{
}

double face_plus(const Field& next, const Field& old, const LimiterState* coef, std::size_t k)
{
    const double* u = next.u.data();
    if (coef == nullptr) return u[k];
    const double l = coef->l_plus[k];
    const double w = coef->w_plus[k];
    return u[k] - 0.5 * l * (w * (u[k - 1] - old.u[k]) + (1.0 - w) * (u[k] - old.u[k + 1]));
}

double face_minus(const Field& next, const Field& old, const LimiterState* coef, std::size_t k)
{
    const double* u = next.u.data();
    if (coef == nullptr) return u[k];
    const double l = coef->l_minus[k];
    const double w = coef->w_minus[k];
    return u[k] - 0.5 * l * (w * (u[k + 1] - old.u[k]) + (1.0 - w) * (u[k] - old.u[k - 1]));
}

LimiterState compute_limiter(const Grid1D& g, const Field& pred, const Field& old, double eps)
{
    LimiterState c;
    c.resize(g.size());
    const std::size_t first = g.index(0);
    simd::LimiterArgs a{pred.u.data() + first,  old.u.data() + first,  1,
                        eps,
                        c.w_plus.data() + first, c.w_minus.data() + first,
                        c.l_plus.data() + first, c.l_minus.data() + first,
                        static_cast<std::size_t>(g.cells() + 2)};
    simd::kernels().weno_limiter(a);
    return c;
}

StepResult1D step_explicit1(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg)
{
    const auto t0 = Clock::now();
    const auto& kt = simd::kernels();
    const Grid1D& g = p.grid;
    const auto m = static_cast<std::size_t>(g.cells());
    const double r = tau / g.h();

    std::vector<double> flux(m + 1);
    kt.edge_flux(p.edges.plus.data(), p.edges.minus.data(), current.u.data() + g.index(0),
                 current.u.data() + g.index(1), flux.data(), m + 1);
    std::vector<double> qnew(g.size(), 0.0);
    kt.conservative_update(current.q.data() + g.index(1), flux.data(), r, qnew.data() + g.index(1), m);

    StepResult1D out;
    out.field = current;
    invert_interior(p, qnew, out.field, cfg.newton, out.diag);
    out.diag.range_violations = clamp_range(g, p.iso, out.field);
    fill_ghosts(g, p.bc, t + tau, p.iso, out.field);
    out.diag.flux_left = tau * flux[0];
    out.diag.flux_right = tau * flux[m];
    const bool inverted = out.diag.finite;
    finish(p, current, out.field, tau, out.diag);
    out.diag.finite = out.diag.finite && inverted;
    out.diag.sweeps_used = 1;
    out.diag.wall_time = seconds_since(t0);
    return out;
}

StepResult1D step_explicit2(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg)
{
    const auto t0 = Clock::now();
    const auto& kt = simd::kernels();
    const Grid1D& g = p.grid;
    const auto m = static_cast<std::size_t>(g.cells());
    const double r = tau / g.h();
    std::vector<double> ul(m + 1);
    std::vector<double> ur(m + 1);

    const auto fluxes = [&](const Field& f, std::vector<double>& flux) {
        flux.resize(m + 1);
        kt.fromm_faces(f.u.data() + g.index(0), ul.data(), ur.data(), m + 1);
        kt.edge_flux(p.edges.plus.data(), p.edges.minus.data(), ul.data(), ur.data(), flux.data(), m + 1);
    };

    StepResult1D out;
    std::vector<double> flux1;
    std::vector<double> flux2;
    fluxes(current, flux1);
    std::vector<double> q1(g.size(), 0.0);
    kt.conservative_update(current.q.data() + g.index(1), flux1.data(), r, q1.data() + g.index(1), m);
    Field mid = current;
    invert_interior(p, q1, mid, cfg.newton, out.diag);
    fill_ghosts(g, p.bc, t + tau, p.iso, mid);

    fluxes(mid, flux2);
    std::vector<double> qnew(g.size(), 0.0);
    kt.conservative_update(q1.data() + g.index(1), flux2.data(), r, qnew.data() + g.index(1), m);
    for (int i = 1; i <= g.cells(); ++i) {
        const std::size_t k = g.index(i);
        qnew[k] = 0.5 * (current.q[k] + qnew[k]);
    }

    out.field = mid;
    invert_interior(p, qnew, out.field, cfg.newton, out.diag);
    out.diag.range_violations = clamp_range(g, p.iso, out.field);
    fill_ghosts(g, p.bc, t + tau, p.iso, out.field);
    out.diag.flux_left = tau * 0.5 * (flux1[0] + flux2[0]);
    out.diag.flux_right = tau * 0.5 * (flux1[m] + flux2[m]);
    const bool inverted = out.diag.finite;
    finish(p, current, out.field, tau, out.diag);
    out.diag.finite = out.diag.finite && inverted;
    out.diag.sweeps_used = 2;
    out.diag.wall_time = seconds_since(t0);
    return out;
}

StepResult1D step_implicit1(const Problem1D& p, const Field& current, double t, double tau,
                            const SchemeConfig& cfg)
{
    return implicit_step(p, current, t, tau, cfg, nullptr, nullptr);
}

StepResult1D step_limited(const Problem1D& p, const Field& current, double t, double tau,
                          const SchemeConfig& cfg, const LimiterState& coef, const Field* guess)
{
    if (coef.l_plus.size() != p.grid.size())
        throw ValidationError({"limiter state does not match the grid"});
    return implicit_step(p, current, t, tau, cfg, &coef, guess);
}

StepResult1D step_compact2(const Problem1D& p, const Field& current, double t, double tau,
                           const SchemeConfig& cfg)
{
    LimiterState coef;
    coef.resize(p.grid.size());
    const double l = cfg.force_first_order ? 0.0 : 1.0;
    std::fill(coef.w_plus.begin(), coef.w_plus.end(), cfg.omega);
    std::fill(coef.w_minus.begin(), coef.w_minus.end(), cfg.omega);
    std::fill(coef.l_plus.begin(), coef.l_plus.end(), l);
    std::fill(coef.l_minus.begin(), coef.l_minus.end(), l);
    return implicit_step(p, current, t, tau, cfg, &coef, nullptr);
}

StepResult1D step_hires_weno(const Problem1D& p, const Field& current, double t, double tau,
                             const SchemeConfig& cfg)
{
    const auto t0 = Clock::now();
    StepResult1D pred = step_implicit1(p, current, t, tau, cfg);
    StepResult1D corr;
    const Field* base = &pred.field;
    long iters = pred.diag.newton_iters_total;
    for (int pass = 0; pass < cfg.corrector_passes; ++pass) {
        LimiterState coef = compute_limiter(p.grid, *base, current, cfg.weno_eps);
        if (cfg.force_first_order) {
            std::fill(coef.l_plus.begin(), coef.l_plus.end(), 0.0);
            std::fill(coef.l_minus.begin(), coef.l_minus.end(), 0.0);
        }
        StepResult1D next = implicit_step(p, current, t, tau, cfg, &coef, base,
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

StepResult1D step(const Problem1D& p, const Field& current, double t, double tau, const SchemeConfig& cfg)
{
    switch (cfg.kind) {
    case SchemeKind::explicit1: return step_explicit1(p, current, t, tau, cfg);
    case SchemeKind::explicit2: return step_explicit2(p, current, t, tau, cfg);
    case SchemeKind::implicit1: return step_implicit1(p, current, t, tau, cfg);
    case SchemeKind::compact2: return step_compact2(p, current, t, tau, cfg);
    case SchemeKind::hires_weno: return step_hires_weno(p, current, t, tau, cfg);
    }
    throw ValidationError({"unknown scheme"});
}

void Run1DConfig::validate() const
{
    std::vector<std::string> bad;
    if (!(t_end > t0)) bad.emplace_back("time.t_end must exceed time.t0");
    if (steps < 0) bad.emplace_back("time.steps must be >= 0");
    if (!initial) bad.emplace_back("initial condition missing");
    try {
        scheme.validate();
    } catch (const ValidationError& e) {
        bad.insert(bad.end(), e.violations().begin(), e.violations().end());
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

RunResult1D run_1d(const Run1DConfig& cfg)
{
    cfg.validate();
    const auto t0 = Clock::now();
    const Problem1D prob(cfg.grid, cfg.velocity, cfg.iso, cfg.bc);
    const Grid1D& g = cfg.grid;
    const auto& kt = simd::kernels();

    RunResult1D res;
    // steps = 0 returns the initial field with ghosts filled.
    res.tau = cfg.steps > 0 ? (cfg.t_end - cfg.t0) / cfg.steps : 0.0;
    res.c_max = courant_max_1d(g, cfg.velocity, res.tau);

    Field field = cfg.initial(g, cfg.iso);
    if (field.u.size() != g.size() || field.q.size() != g.size())
        throw ValidationError({"initial condition has the wrong size"});
    fill_ghosts(g, cfg.bc, cfg.t0, cfg.iso, field);
    res.initial = field;
    const auto m = static_cast<std::size_t>(g.cells());
    res.ledger.initial_mass = g.h() * kt.sum(field.q.data() + g.index(1), m);

    for (int n = 0; n < cfg.steps; ++n) {
        const double t = cfg.t0 + n * res.tau;
        StepResult1D s = step(prob, field, t, res.tau, cfg.scheme);
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

    res.ledger.final_mass = g.h() * kt.sum(field.q.data() + g.index(1), m);
    res.ledger.drift = res.ledger.final_mass - res.ledger.initial_mass + res.ledger.boundary_net;
    const double scale = std::max(std::abs(res.ledger.initial_mass), std::abs(res.ledger.final_mass));
    res.ledger.relative_drift = scale > 0.0 ? std::abs(res.ledger.drift) / scale : std::abs(res.ledger.drift);
    res.final = std::move(field);
    res.wall_seconds = seconds_since(t0);
    return res;
}

} // namespace sorptran
