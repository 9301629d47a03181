#pragma once

#include <cstddef>
#include <vector>

namespace sorptran {

/// Ghost layers on every side; the second-order stencils reach i-2 and i+2.
inline constexpr int kGhost = 2;

/**
 * Uniform 1D finite-volume mesh. Cells are numbered 1..M as in the usual
 * finite-volume notation; ghosts are -1, 0 and M+1, M+2. Storage index of
 * cell i is i + 1.
 */
class Grid1D {
public:
    Grid1D(double x_left, double x_right, int cells);

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_right_; }
    int cells() const noexcept { return cells_; }
    double h() const noexcept { return h_; }

    /// Number of stored values, ghosts included.
    std::size_t size() const noexcept { return static_cast<std::size_t>(cells_ + 2 * kGhost); }
    std::size_t index(int i) const noexcept { return static_cast<std::size_t>(i + kGhost - 1); }

    double center(int i) const noexcept { return x_left_ + (i - 0.5) * h_; }
    /// x_{i+1/2}; edge(0) is the left boundary.
    double edge(int i) const noexcept { return x_left_ + i * h_; }

    bool operator==(const Grid1D&) const = default;

private:
    double x_left_;
    double x_right_;
    int cells_;
    double h_;
};

/// Square uniform mesh [x_left, x_right]^2 with M cells per axis, x index fastest.
class Grid2D {
public:
    Grid2D(double x_left, double x_right, int cells);

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_right_; }
    int cells() const noexcept { return cells_; }
    double h() const noexcept { return h_; }

    std::size_t stride() const noexcept { return static_cast<std::size_t>(cells_ + 2 * kGhost); }
    std::size_t size() const noexcept { return stride() * stride(); }
    std::size_t index(int i, int j) const noexcept
    {
        return static_cast<std::size_t>(j + kGhost - 1) * stride() + static_cast<std::size_t>(i + kGhost - 1);
    }

    double center(int i) const noexcept { return x_left_ + (i - 0.5) * h_; }
    double edge(int i) const noexcept { return x_left_ + i * h_; }

    bool operator==(const Grid2D&) const = default;

private:
    double x_left_;
    double x_right_;
    int cells_;
    double h_;
};

/// Cell-averaged solution with paired values q = F(u). Both arrays include ghosts.
struct Field {
    std::vector<double> u;
    std::vector<double> q;
};

class IsothermSpec;

Field make_field(const IsothermSpec& iso, std::vector<double> u);

/// Interior u values in cell order (1D).
std::vector<double> interior(const Grid1D& g, const std::vector<double>& values);
/// Interior values, row-major by y then x (2D).
std::vector<double> interior(const Grid2D& g, const std::vector<double>& values);

} // namespace sorptran
