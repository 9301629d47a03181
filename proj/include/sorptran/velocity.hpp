#pragma once

#include "sorptran/grid.hpp"

#include <string>
#include <vector>

namespace sorptran {

/// 1D velocity v(x): constant, amplitude * cos(wavenumber * x), or a piecewise-linear table.
class VelocityField1D {
public:
    enum class Kind { constant, cosine, tabulated };

    static VelocityField1D constant(double value);
    static VelocityField1D cosine(double amplitude = 1.0, double wavenumber = 1.0);
    /// Linear interpolation through (xs, vs); constant extrapolation outside.
    static VelocityField1D tabulated(std::vector<double> xs, std::vector<double> vs);

    Kind kind() const noexcept { return kind_; }
    double operator()(double x) const;
    std::string describe() const;

    const std::vector<double>& table_x() const noexcept { return xs_; }
    const std::vector<double>& table_v() const noexcept { return vs_; }
    double param0() const noexcept { return a_; }
    double param1() const noexcept { return b_; }

private:
    VelocityField1D() = default;

    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> xs_;
    std::vector<double> vs_;
};

/// 2D velocity (v, w): constant, or solid-body rotation (-omega y, omega x).
class VelocityField2D {
public:
    enum class Kind { constant, rotation };

    static VelocityField2D constant(double vx, double vy);
    static VelocityField2D rotation(double omega);

    Kind kind() const noexcept { return kind_; }
    double vx(double x, double y) const noexcept;
    double vy(double x, double y) const noexcept;
    double param0() const noexcept { return a_; }
    double param1() const noexcept { return b_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double b_ = 0.0;
};

/// Split edge velocities x_{i+1/2}, i = 0..M: index e holds edge e.
struct EdgeVelocity1D {
    std::vector<double> v;
    std::vector<double> plus;   ///< max(0, v)
    std::vector<double> minus;  ///< min(0, v)
};

EdgeVelocity1D edge_velocity(const Grid1D& g, const VelocityField1D& vel);

/**
 * Split 2D edge velocities.
 *
 * x-edges (x_{i+1/2}, y_j): `vx*[(j - 1) * (M + 1) + i]`, i = 0..M, j = 1..M.
 * y-edges (x_i, y_{j+1/2}): `vy*[j * M + (i - 1)]`, i = 1..M, j = 0..M.
 */
struct EdgeVelocity2D {
    std::vector<double> vx, vx_plus, vx_minus;
    std::vector<double> vy, vy_plus, vy_minus;
    int cells = 0;

    std::size_t xe(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(cells + 1) + static_cast<std::size_t>(i);
    }
    std::size_t ye(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(cells) + static_cast<std::size_t>(i - 1);
    }
};

EdgeVelocity2D edge_velocity(const Grid2D& g, const VelocityField2D& vel);

/// max over cells of |(v_{i+1/2,j} - v_{i-1/2,j}) + (w_{i,j+1/2} - w_{i,j-1/2})|,
/// relative to the largest edge speed.
double max_relative_divergence(const EdgeVelocity2D& e);

/// (tau / h) * max over cells of max(|v_{i-1/2}|, |v_{i+1/2}|).
double courant_max_1d(const Grid1D& g, const VelocityField1D& vel, double tau);

struct Courant2D {
    double x;
    double y;
};

Courant2D courant_max_2d(const Grid2D& g, const VelocityField2D& vel, double tau);

} // namespace sorptran
