#include "sorptran/exact.hpp"

#include "sorptran/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sorptran {

namespace {

constexpr double kLinearBand = 1e-6;
constexpr int kPanels = 4;

} // namespace

StepRiemannSolution::StepRiemannSolution(IsothermSpec iso)
    : iso_(iso), linear_(std::abs(iso.p() - 1.0) < kLinearBand)
{
    const double a = iso.a();
    const double p = iso.p();
    t_interact_ = linear_ ? std::numeric_limits<double>::infinity()
                          : (1.0 + a) * (1.0 + a * p) / (a * std::abs(1.0 - p));
}

void StepRiemannSolution::check_time(double t) const
{
    if (!(t >= 0.0) || !(t < t_interact_))
        throw DomainError("step solution valid only for 0 <= t < " + std::to_string(t_interact_) + ", got t = "
                          + std::to_string(t));
}

double StepRiemannSolution::shock_position(double t) const
{
    check_time(t);
    const double s = t / (1.0 + iso_.a());
    return (linear_ || iso_.p() < 1.0) ? 1.0 + s : s;
}

double StepRiemannSolution::fan_lo(double t) const
{
    check_time(t);
    if (linear_) return shock_position(t);
    return iso_.p() < 1.0 ? 0.0 : 1.0 + t / (1.0 + iso_.a() * iso_.p());
}

double StepRiemannSolution::fan_hi(double t) const
{
    check_time(t);
    if (linear_) return shock_position(t);
    return iso_.p() < 1.0 ? t / (1.0 + iso_.a() * iso_.p()) : 1.0 + t;
}

// Solves F'(u) = t / xi for the fan value, xi measured from the fan origin.
double StepRiemannSolution::fan_value(double xi, double t) const
{
    const double a = iso_.a();
    const double p = iso_.p();
    const double base = (t / xi - 1.0) / (a * p);
    if (!(base > 0.0)) return p < 1.0 ? 1.0 : 0.0;
    return std::clamp(std::pow(base, 1.0 / (p - 1.0)), 0.0, 1.0);
}

double StepRiemannSolution::u(double x, double t) const
{
    check_time(t);
    const double a = iso_.a();
    if (t == 0.0 || linear_) {
        const double s = t / (1.0 + a);
        return (x > s && x < 1.0 + s) ? 1.0 : 0.0;
    }
    const double shock = shock_position(t);
    const double lo = fan_lo(t);
    const double hi = fan_hi(t);
    if (iso_.p() < 1.0) {
        if (x <= 0.0 || x >= shock) return 0.0;
        if (x >= hi) return 1.0;
        return fan_value(x, t);
    }
    if (x <= shock || x >= hi) return 0.0;
    if (x <= lo) return 1.0;
    return fan_value(x - 1.0, t);
}

double StepRiemannSolution::q(double x, double t) const
{
    return isotherm_F(iso_, u(x, t));
}

std::vector<double> StepRiemannSolution::breakpoints(double t) const
{
    check_time(t);
    std::vector<double> b;
    if (t == 0.0 || linear_) {
        const double s = t / (1.0 + iso_.a());
        b = {s, 1.0 + s};
    } else {
        b = {shock_position(t), fan_lo(t), fan_hi(t)};
        if (iso_.p() < 1.0) b.push_back(0.0);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

template <class G>
double StepRiemannSolution::average(double x_l, double x_r, double t, G&& g) const
{
    if (!(x_r > x_l)) throw DomainError("cell average needs x_r > x_l");
    std::vector<double> cuts{x_l};
    for (double b : breakpoints(t))
        if (b > x_l && b < x_r) cuts.push_back(b);
    cuts.push_back(x_r);
    using Rule = boost::math::quadrature::gauss<double, 8>;
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double w = (cuts[s + 1] - cuts[s]) / kPanels;
        for (int k = 0; k < kPanels; ++k) {
            const double lo = cuts[s] + k * w;
            total += Rule::integrate(g, lo, lo + w);
        }
    }
    return total / (x_r - x_l);
}

double StepRiemannSolution::cell_average_u(double x_l, double x_r, double t) const
{
    return average(x_l, x_r, t, [&](double x) { return u(x, t); });
}

double StepRiemannSolution::cell_average_q(double x_l, double x_r, double t) const
{
    return average(x_l, x_r, t, [&](double x) { return q(x, t); });
}

} // namespace sorptran
