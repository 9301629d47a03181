#pragma once

// Data-parallel inner loops of the solvers. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at run
// time. Elementwise kernels agree bit-for-bit across backends; reductions
// agree to rounding.

#include <cstddef>
#include <string_view>

namespace sorptran::simd {

enum class Backend { scalar, avx2 };

/// Inputs of the WENO weight / limiter kernel. Pointers address the first
/// cell; neighbours sit at +-stride.
struct LimiterArgs {
    const double* u_pred;
    const double* u_old;
    std::ptrdiff_t stride;
    double eps;
    double* w_plus;
    double* w_minus;
    double* l_plus;
    double* l_minus;
    std::size_t n;
};

struct KernelTable {
    /// vp = max(0, v), vm = min(0, v).
    void (*split_velocity)(const double* v, double* vp, double* vm, std::size_t n);
    /// flux[k] = vp[k] * ul[k] + vm[k] * ur[k].
    void (*edge_flux)(const double* vp, const double* vm, const double* ul, const double* ur,
                      double* flux, std::size_t n);
    /// out[k] = q[k] - r * (flux[k + 1] - flux[k]).
    void (*conservative_update)(const double* q, const double* flux, double r, double* out,
                                std::size_t n);
    /// Fromm face values of edge k (between u[k] and u[k + 1]).
    void (*fromm_faces)(const double* u, double* ul, double* ur, std::size_t n);
    void (*weno_limiter)(const LimiterArgs& args);
    double (*l1_diff)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    void (*min_max)(const double* a, std::size_t n, double* lo, double* hi);
};

bool available(Backend b) noexcept;
Backend best_available() noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if the backend is not usable on this CPU.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

const KernelTable& kernels(Backend b);
inline const KernelTable& kernels() { return kernels(active_backend()); }

} // namespace sorptran::simd
