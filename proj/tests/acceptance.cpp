// Acceptance suite: one PASS/FAIL line per criterion A1..A10.
#include "sorptran/exact.hpp"
#include "sorptran/experiments.hpp"
#include "sorptran/oracle.hpp"
#include "sorptran/presets.hpp"
#include "sorptran/solver1d.hpp"
#include "sorptran/solver2d.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sorptran;

namespace {

constexpr double kPi = std::numbers::pi;

struct Criterion {
    std::string title;
    std::vector<PresetCheck> checks;
};

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

void add(std::map<std::string, Criterion>& out, const std::string& id, std::string label, bool ok, std::string detail)
{
    out[id].checks.push_back({id, std::move(label), ok, std::move(detail)});
}

/// Centre x, centre y and amplitude for each of n random Gaussians.
std::vector<double> random_bumps(std::mt19937& rng, int n_bumps)
{
    std::uniform_real_distribution<double> c(-0.6, 0.6);
    std::uniform_real_distribution<double> amp(0.2, 1.0);
    std::vector<double> params;
    for (int k = 0; k < n_bumps; ++k) params.insert(params.end(), {c(rng), c(rng), amp(rng)});
    return params;
}

// A6: l = 0 reduces compact2 and hires_weno to implicit1.
void check_degeneration(std::map<std::string, Criterion>& out)
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> omega(0.0, 1.0);
    {
        const Grid1D g(-4.0, 11.0, 160);
        const IsothermSpec iso(1.0, 0.5);
        const Problem1D prob(g, VelocityField1D::cosine(1.0, 1.0), iso,
                             Boundary1D{BoundarySide::dirichlet(0.0), BoundarySide::dirichlet(0.0)});
        for (int trial = 0; trial < 5; ++trial) {
            const auto par = random_bumps(rng, 3);
            std::vector<double> u(g.size(), 0.0);
            for (int i = 1; i <= g.cells(); ++i)
                for (int k = 0; k < 3; ++k) {
                    const double d = g.center(i) - 6.0 * par[3 * k];
                    u[g.index(i)] += par[3 * k + 2] * std::exp(-2.0 * d * d);
                }
            Field f = make_field(iso, u);
            fill_ghosts(g, prob.bc, 0.0, iso, f);
            SchemeConfig base;
            base.kind = SchemeKind::implicit1;
            const StepResult1D ref = step(prob, f, 0.0, 0.75, base);
            for (SchemeKind kind : {SchemeKind::compact2, SchemeKind::hires_weno}) {
                SchemeConfig c;
                c.kind = kind;
                c.omega = omega(rng);
                c.force_first_order = true;
                const StepResult1D s = step(prob, f, 0.0, 0.75, c);
                double worst = 0.0;
                for (int i = 1; i <= g.cells(); ++i)
                    worst = std::max(worst, std::abs(s.field.u[g.index(i)] - ref.field.u[g.index(i)]));
                add(out, "A6", "1D " + std::string(scheme_name(kind)) + " field " + std::to_string(trial + 1),
                    worst <= 1e-13, "max diff " + fmt(worst));
            }
        }
    }
    {
        const Grid2D g(-1.0, 1.0, 40);
        const IsothermSpec iso(1.0, 3.0);
        const Problem2D prob(g, VelocityField2D::rotation(2.0 * kPi), iso, Boundary2D{});
        for (int trial = 0; trial < 5; ++trial) {
            const auto par = random_bumps(rng, 3);
            std::vector<double> u(g.size(), 0.0);
            for (int j = 1; j <= g.cells(); ++j)
                for (int i = 1; i <= g.cells(); ++i)
                    for (int k = 0; k < 3; ++k) {
                        const double dx = g.center(i) - par[3 * k];
                        const double dy = g.center(j) - par[3 * k + 1];
                        u[g.index(i, j)] += par[3 * k + 2] * std::exp(-20.0 * (dx * dx + dy * dy));
                    }
            Field f = make_field(iso, u);
            fill_ghosts(g, prob.bc, 0.0, iso, f);
            SchemeConfig base;
            base.kind = SchemeKind::implicit1;
            const StepResult2D ref = step_2d(prob, f, 0.0, 0.05, base);
            for (SchemeKind kind : {SchemeKind::compact2, SchemeKind::hires_weno}) {
                SchemeConfig c;
                c.kind = kind;
                c.omega = omega(rng);
                c.force_first_order = true;
                const StepResult2D s = step_2d(prob, f, 0.0, 0.05, c);
                double worst = 0.0;
                for (int j = 1; j <= g.cells(); ++j)
                    for (int i = 1; i <= g.cells(); ++i)
                        worst = std::max(worst, std::abs(s.field.u[g.index(i, j)] - ref.field.u[g.index(i, j)]));
                add(out, "A6", "2D " + std::string(scheme_name(kind)) + " field " + std::to_string(trial + 1),
                    worst <= 1e-13, "max diff " + fmt(worst));
            }
        }
    }
}

double bisect_cell(double a, double p, double A, double B)
{
    if (B <= 0.0) return 0.0;
    double lo = 0.0, hi = B;
    for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        ((mid + a * std::pow(mid, p) + A * mid - B) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Damped Jacobi fixed point on the full first-order implicit system with zero Dirichlet ghosts.
std::vector<double> damped_fixed_point(const Grid1D& g, double p, const std::vector<double>& u_old, double tau)
{
    const int m = g.cells();
    const double r = tau / g.h();
    std::vector<double> vp(m + 1), vm(m + 1);
    for (int e = 0; e <= m; ++e) {
        const double v = std::cos(g.edge(e));
        vp[e] = std::max(0.0, v);
        vm[e] = std::min(0.0, v);
    }
    std::vector<double> u(u_old), next(m + 2, 0.0);
    constexpr double theta = 0.7;
    for (int it = 0; it < 100000; ++it) {
        double change = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double q = u_old[i] + std::pow(u_old[i], p);
            const double A = r * (vp[i] - vm[i - 1]);
            const double B = q + r * (vp[i - 1] * u[i - 1] - vm[i] * u[i + 1]);
            next[i] = (1.0 - theta) * u[i] + theta * bisect_cell(1.0, p, A, B);
            change = std::max(change, std::abs(next[i] - u[i]));
        }
        for (int i = 1; i <= m; ++i) u[i] = next[i];
        if (change < 1e-15) break;
    }
    return u;
}

// A7: fast sweeping against a brute-force fixed point on v = cos x.
void check_oracle_equivalence(std::map<std::string, Criterion>& out)
{
    for (double p : {0.25, 0.5, 4.0}) {
        const Run1DConfig cfg = cos_velocity_config(p, SchemeKind::implicit1, 160, 2);
        const RunResult1D res = run_1d(cfg);
        const Grid1D& g = cfg.grid;
        std::vector<double> u(g.cells() + 2, 0.0);
        for (int i = 1; i <= g.cells(); ++i) u[i] = gauss4_1d(g.center(i));
        for (int n = 0; n < cfg.steps; ++n) u = damped_fixed_point(g, p, u, res.tau);
        double worst = 0.0;
        for (int i = 1; i <= g.cells(); ++i) worst = std::max(worst, std::abs(u[i] - res.final.u[g.index(i)]));
        add(out, "A7", "cos velocity M=160 p=" + fmt(p), worst <= 1e-8, "max diff " + fmt(worst));
    }
}

// A8: exact step solution against the fine-grid oracle at T = 3.
void check_exact_vs_oracle(std::map<std::string, Criterion>& out)
{
    for (double p : {0.25, 0.5, 2.0, 3.0}) {
        const Run1DConfig cfg = step_problem_config(p, SchemeKind::hires_weno, 320, 32);
        const Field o = fine_grid_oracle(cfg, 4);
        const StepRiemannSolution exact(cfg.iso);
        const Grid1D& g = cfg.grid;
        const double t = cfg.t_end;
        const double h = g.h();
        const double s = exact.shock_position(t);
        const double lo = exact.fan_lo(t);
        const double hi = exact.fan_hi(t);
        // Steepest edge on the shock side of the fan.
        const bool right = p < 1.0;
        const double split = right ? 0.5 * hi : lo;
        int best = 1;
        double steepest = -1.0;
        for (int i = 1; i < g.cells(); ++i) {
            if (right ? g.edge(i) < split : g.edge(i) > split) continue;
            const double jump = std::abs(o.u[g.index(i + 1)] - o.u[g.index(i)]);
            if (jump > steepest) {
                steepest = jump;
                best = i;
            }
        }
        const double gap = std::abs(g.edge(best) - s);
        add(out, "A8", "front p=" + fmt(p), gap <= 2.0 * h,
            "oracle " + fmt(g.edge(best)) + ", exact " + fmt(s) + ", |diff| / h = " + fmt(gap / h));
        // Rarefaction cells lying inside the fan.
        const double tol = 3.0 * std::pow(h, 0.8);
        double worst = 0.0;
        int cells = 0;
        for (int i = 1; i <= g.cells(); ++i) {
            if (g.edge(i - 1) < lo || g.edge(i) > hi) continue;
            ++cells;
            worst = std::max(worst, std::abs(o.u[g.index(i)] - exact.cell_average_u(g.edge(i - 1), g.edge(i), t)));
        }
        add(out, "A8", "rarefaction p=" + fmt(p), cells > 0 && worst <= tol,
            std::to_string(cells) + " cells, max diff " + fmt(worst) + " vs " + fmt(tol));
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance suite"};
    std::string out_dir = "acceptance_out";
    bool parallel = false;
    int rungs = 0;
    app.add_option("--out", out_dir, "Artifact directory");
    app.add_flag("--parallel", parallel, "Run ladder rungs concurrently (skips A9)");
    app.add_option("--rungs", rungs, "Keep only the first k rungs (smoke runs)")->check(CLI::NonNegativeNumber);
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, Criterion> crit;
    crit["A1"].title = "smooth-region convergence";
    crit["A2"].title = "large-Courant implicit convergence";
    crit["A3"].title = "discontinuous-IC convergence";
    crit["A4"].title = "blow-up vs unconditional stability";
    crit["A5"].title = "conservation";
    crit["A6"].title = "degeneration identities";
    crit["A7"].title = "oracle equivalence of fast sweeping";
    crit["A8"].title = "exact-solution cross-check";
    crit["A9"].title = "CPU parity";
    crit["A10"].title = "limiter range property";

    PresetOptions opt;
    opt.out_dir = out_dir;
    opt.parallel = parallel;
    opt.max_rungs = rungs;
    double step_tables = 0.0;
    for (const auto& name : preset_names()) {
        std::cerr << "running preset " << name << " ..." << std::flush;
        const PresetReport r = run_preset(name, opt);
        std::cerr << ' ' << fmt(r.wall_seconds) << " s\n";
        if (name.ends_with("-step")) step_tables += r.wall_seconds;
        for (const auto& c : r.checks)
            if (!c.criterion.empty()) crit[c.criterion].checks.push_back(c);
        for (const auto& l : r.ladders)
            for (std::size_t i = 0; i < l.stats.size(); ++i)
                if (l.stats[i].failure)
                    add(crit, "A5", name + " " + l.label + " rung " + std::to_string(i + 1) + " completed", false,
                        *l.stats[i].failure);
    }
    add(crit, "A3", "Tables 3-5 total runtime <= 900 s", step_tables <= 900.0, fmt(step_tables) + " s");

    std::cerr << "running A6-A8 checks ...\n";
    check_degeneration(crit);
    check_oracle_equivalence(crit);
    check_exact_vs_oracle(crit);

    int failed = 0;
    for (int k = 1; k <= 10; ++k) {
        const std::string id = "A" + std::to_string(k);
        const Criterion& c = crit[id];
        int bad = 0;
        for (const auto& x : c.checks) bad += x.passed ? 0 : 1;
        const bool ok = !c.checks.empty() && bad == 0;
        std::cout << (ok ? "PASS " : "FAIL ") << id << ' ' << c.title << ": " << c.checks.size() - bad << '/'
                  << c.checks.size() << " checks passed" << (c.checks.empty() ? " (no checks ran)" : "") << '\n';
        for (const auto& x : c.checks)
            if (!x.passed) std::cout << "    failed: " << x.label << ": " << x.detail << '\n';
        if (!ok) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
