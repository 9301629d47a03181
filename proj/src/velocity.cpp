#include "sorptran/velocity.hpp"

#include "sorptran/errors.hpp"
#include "sorptran/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sorptran {

VelocityField1D VelocityField1D::constant(double value)
{
    VelocityField1D f;
    f.kind_ = Kind::constant;
    f.a_ = value;
    return f;
}

VelocityField1D VelocityField1D::cosine(double amplitude, double wavenumber)
{
    VelocityField1D f;
    f.kind_ = Kind::cosine;
    f.a_ = amplitude;
    f.b_ = wavenumber;
    return f;
}

VelocityField1D VelocityField1D::tabulated(std::vector<double> xs, std::vector<double> vs)
{
    std::vector<std::string> bad;
    if (xs.size() != vs.size()) bad.emplace_back("velocity.x and velocity.v must have equal length");
    if (xs.empty()) bad.emplace_back("velocity table must not be empty");
    if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        bad.emplace_back("velocity.x must be strictly increasing");
    if (!bad.empty()) throw ValidationError(std::move(bad));
    VelocityField1D f;
    f.kind_ = Kind::tabulated;
    f.xs_ = std::move(xs);
    f.vs_ = std::move(vs);
    return f;
}

double VelocityField1D::operator()(double x) const
{
    switch (kind_) {
    case Kind::constant:
        return a_;
    case Kind::cosine:
        return a_ * std::cos(b_ * x);
    case Kind::tabulated: {
        if (x <= xs_.front()) return vs_.front();
        if (x >= xs_.back()) return vs_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const auto k = static_cast<std::size_t>(it - xs_.begin());
        const double t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
        return vs_[k - 1] + t * (vs_[k] - vs_[k - 1]);
    }
    }
    return 0.0;
}

std::string VelocityField1D::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case Kind::constant: os << "constant(" << a_ << ")"; break;
    case Kind::cosine: os << a_ << "*cos(" << b_ << "x)"; break;
    case Kind::tabulated: os << "tabulated(" << xs_.size() << " points)"; break;
    }
    return os.str();
}

VelocityField2D VelocityField2D::constant(double vx, double vy)
{
    VelocityField2D f;
    f.kind_ = Kind::constant;
    f.a_ = vx;
    f.b_ = vy;
    return f;
}

VelocityField2D VelocityField2D::rotation(double omega)
{
    VelocityField2D f;
    f.kind_ = Kind::rotation;
    f.a_ = omega;
    return f;
}

double VelocityField2D::vx(double /*x*/, double y) const noexcept
{
    return kind_ == Kind::rotation ? -a_ * y : a_;
}

double VelocityField2D::vy(double x, double /*y*/) const noexcept
{
    return kind_ == Kind::rotation ? a_ * x : b_;
}

std::string VelocityField2D::describe() const
{
    std::ostringstream os;
    if (kind_ == Kind::rotation)
        os << "rotation(" << a_ << ")";
    else
        os << "constant(" << a_ << ", " << b_ << ")";
    return os.str();
}

EdgeVelocity1D edge_velocity(const Grid1D& g, const VelocityField1D& vel)
{
    const auto n = static_cast<std::size_t>(g.cells() + 1);
    EdgeVelocity1D e;
    e.v.resize(n);
    e.plus.resize(n);
    e.minus.resize(n);
    for (std::size_t k = 0; k < n; ++k) e.v[k] = vel(g.edge(static_cast<int>(k)));
    simd::kernels().split_velocity(e.v.data(), e.plus.data(), e.minus.data(), n);
    return e;
}

EdgeVelocity2D edge_velocity(const Grid2D& g, const VelocityField2D& vel)
{
    const int m = g.cells();
    const auto n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m + 1);
    EdgeVelocity2D e;
    e.cells = m;
    e.vx.resize(n);
    e.vy.resize(n);
    for (int j = 1; j <= m; ++j)
        for (int i = 0; i <= m; ++i) e.vx[e.xe(i, j)] = vel.vx(g.edge(i), g.center(j));
    for (int j = 0; j <= m; ++j)
        for (int i = 1; i <= m; ++i) e.vy[e.ye(i, j)] = vel.vy(g.center(i), g.edge(j));
    e.vx_plus.resize(n);
    e.vx_minus.resize(n);
    e.vy_plus.resize(n);
    e.vy_minus.resize(n);
    const auto& k = simd::kernels();
    k.split_velocity(e.vx.data(), e.vx_plus.data(), e.vx_minus.data(), n);
    k.split_velocity(e.vy.data(), e.vy_plus.data(), e.vy_minus.data(), n);
    return e;
}

double max_relative_divergence(const EdgeVelocity2D& e)
{
    const int m = e.cells;
    double vmax = 0.0;
    for (double v : e.vx) vmax = std::max(vmax, std::abs(v));
    for (double v : e.vy) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) return 0.0;
    double worst = 0.0;
    for (int j = 1; j <= m; ++j) {
        for (int i = 1; i <= m; ++i) {
            const double div = (e.vx[e.xe(i, j)] - e.vx[e.xe(i - 1, j)]) + (e.vy[e.ye(i, j)] - e.vy[e.ye(i, j - 1)]);
            worst = std::max(worst, std::abs(div));
        }
    }
    return worst / vmax;
}

double courant_max_1d(const Grid1D& g, const VelocityField1D& vel, double tau)
{
    double vmax = 0.0;
    for (int i = 0; i <= g.cells(); ++i) vmax = std::max(vmax, std::abs(vel(g.edge(i))));
    return tau / g.h() * vmax;
}

Courant2D courant_max_2d(const Grid2D& g, const VelocityField2D& vel, double tau)
{
    const auto e = edge_velocity(g, vel);
    double cx = 0.0;
    double cy = 0.0;
    for (double v : e.vx) cx = std::max(cx, std::abs(v));
    for (double v : e.vy) cy = std::max(cy, std::abs(v));
    return {tau / g.h() * cx, tau / g.h() * cy};
}

} // namespace sorptran
