#include "sorptran/isotherm.hpp"

#include "sorptran/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sorptran {

void NewtonConfig::validate() const
{
    std::vector<std::string> bad;
    if (!(abs_tol > 0.0)) bad.emplace_back("newton.abs_tol must be > 0");
    if (max_iter < 1) bad.emplace_back("newton.max_iter must be >= 1");
    if (!(reg_floor > 0.0)) bad.emplace_back("newton.reg_floor must be > 0");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

IsothermSpec::IsothermSpec(double a, double p) : a_(a), p_(p)
{
    std::vector<std::string> bad;
    if (!(a > 0.0) || !std::isfinite(a)) bad.emplace_back("isotherm.a must be a finite value > 0");
    if (!(p > 0.0) || !std::isfinite(p)) bad.emplace_back("isotherm.p must be a finite value > 0");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

double IsothermSpec::eval_extended(double u) const noexcept
{
    return u > 0.0 ? u + a_ * std::pow(u, p_) : u;
}

double isotherm_F(const IsothermSpec& s, double u)
{
    if (!(u >= 0.0)) throw DomainError("isotherm_F: u must be >= 0, got " + std::to_string(u));
    return s.eval_extended(u);
}

double isotherm_dF(const IsothermSpec& s, double u, const NewtonConfig& cfg)
{
    const double ur = std::max(u, cfg.reg_floor);
    return 1.0 + s.p() * s.a() * std::pow(ur, s.p() - 1.0);
}

double isotherm_invert(const IsothermSpec& s, double q, const NewtonConfig& cfg)
{
    if (!(q >= 0.0)) throw DomainError("isotherm_invert: q must be >= 0, got " + std::to_string(q));
    if (q == 0.0) return 0.0;
    return solve_cell(s, 0.0, q, cfg, q).u;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Bracket {
    double lo;
    double hi;

    void narrow(double y, double g)
    {
        if (g > 0.0)
            hi = std::min(hi, y);
        else
            lo = std::max(lo, y);
    }

    bool collapsed() const { return hi - lo <= 4.0 * kEps * hi; }
};

[[noreturn]] void fail(double u, double g, int iters)
{
    throw SolverError("cell Newton iteration did not converge after " + std::to_string(iters) +
                          " iterations (residual " + std::to_string(g) + ")",
                      u, g);
}

// p >= 1: G(u) = (1 + A) u + a u^p - B is convex and increasing in u.
CellSolution solve_convex_u(const IsothermSpec& s, double A, double B, const NewtonConfig& cfg,
                            double guess)
{
    const double a = s.a();
    const double p = s.p();
    const double lin = 1.0 + A;
    Bracket br{0.0, std::min(B / lin, std::pow(B / a, 1.0 / p))};

    double y = br.hi;
    if (guess > br.lo && guess < br.hi) y = guess;

    double g = 0.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        g = lin * y + a * std::pow(y, p) - B;
        if (std::abs(g) <= cfg.abs_tol) return {y, it};
        br.narrow(y, g);
        if (br.collapsed()) return {y, it};
        const double d = isotherm_dF(s, y, cfg) + A;
        double next = y - g / d;
        if (!(next > br.lo && next < br.hi)) next = 0.5 * (br.lo + br.hi);
        y = next;
    }
    fail(y, g, cfg.max_iter);
}

// p < 1: with s = u^p, G(s) = (1 + A) s^(1/p) + a s - B is convex with G' >= a.
CellSolution solve_convex_s(const IsothermSpec& iso, double A, double B, const NewtonConfig& cfg,
                            double guess)
{
    const double a = iso.a();
    const double p = iso.p();
    const double inv_p = 1.0 / p;
    const double lin = 1.0 + A;
    Bracket br{0.0, std::min(B / a, std::pow(B / lin, p))};

    double y = br.hi;
    if (guess > 0.0) {
        const double yg = std::pow(guess, p);
        if (yg > br.lo && yg < br.hi) y = yg;
    }

    double g = 0.0;
    double x = 0.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        x = std::pow(y, inv_p);
        g = lin * x + a * y - B;
        if (std::abs(g) <= cfg.abs_tol) return {x, it};
        br.narrow(y, g);
        if (br.collapsed()) return {x, it};
        const double d = y > 0.0 ? lin * inv_p * (x / y) + a : a;
        double next = y - g / d;
        if (!(next > br.lo && next < br.hi)) next = 0.5 * (br.lo + br.hi);
        y = next;
    }
    fail(x, g, cfg.max_iter);
}

} // namespace

CellSolution solve_cell(const IsothermSpec& s, double A, double B, const NewtonConfig& cfg,
                        double guess)
{
    const double lin = 1.0 + A;
    if (!(B > 0.0) || !std::isfinite(B)) {
        // Root lies on the linear branch u <= 0; non-finite input propagates.
        return {B / lin, 0};
    }
    if (std::isfinite(guess)) {
        const double g = s.eval_extended(guess) + A * guess - B;
        if (std::abs(g) <= cfg.abs_tol) return {guess, 1};
    }
    if (s.p() == 1.0) return {B / (lin + s.a()), 1};
    if (s.p() > 1.0) return solve_convex_u(s, A, B, cfg, guess);
    return solve_convex_s(s, A, B, cfg, guess);
}

} // namespace sorptran
