#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace sorptran::simd::detail {

namespace {

void split_velocity(const double* v, double* vp, double* vm, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) {
        vp[k] = std::max(0.0, v[k]);
        vm[k] = std::min(0.0, v[k]);
    }
}

void edge_flux(const double* vp, const double* vm, const double* ul, const double* ur, double* flux,
               std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) flux[k] = vp[k] * ul[k] + vm[k] * ur[k];
}

void conservative_update(const double* q, const double* flux, double r, double* out, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) out[k] = q[k] - r * (flux[k + 1] - flux[k]);
}

void fromm_faces(const double* u, double* ul, double* ur, std::size_t n)
{
    for (std::size_t k = 0; k < n; ++k) {
        const double* c = u + k;
        ul[k] = c[0] + 0.25 * (c[1] - c[-1]);
        ur[k] = c[1] - 0.25 * (c[2] - c[0]);
    }
}

// Largest l in [0, 1] keeping c - l * d / 2 inside [lo, hi] (c is inside).
inline double limit(double c, double d, double lo, double hi)
{
    const double num = d > 0.0 ? c - lo : hi - c;
    const double den = std::abs(d);
    const double twice = 2.0 * num;
    return twice < den ? twice / den : 1.0;
}

void weno_limiter(const LimiterArgs& a)
{
    const std::ptrdiff_t s = a.stride;
    for (std::size_t k = 0; k < a.n; ++k) {
        const double* up = a.u_pred + static_cast<std::ptrdiff_t>(k);
        const double* uo = a.u_old + static_cast<std::ptrdiff_t>(k);
        const double um = up[-s];
        const double uc = up[0];
        const double uq = up[s];
        const double om = uo[-s];
        const double oc = uo[0];
        const double oq = uo[s];

        const double dm = uc - um;
        const double dp = uq - uc;
        const double bm = dm * dm + a.eps;
        const double bp = dp * dp + a.eps;
        const double bm2 = bm * bm;
        const double bp2 = bp * bp;
        const double den = bm2 + bp2;
        const double wp = bp2 / den;
        const double wm = bm2 / den;

        const double d_plus = wp * (um - oc) + (1.0 - wp) * (uc - oq);
        const double lo_p = std::min(std::min(um, uc), std::min(oc, oq));
        const double hi_p = std::max(std::max(um, uc), std::max(oc, oq));

        const double d_minus = wm * (uq - oc) + (1.0 - wm) * (uc - om);
        const double lo_m = std::min(std::min(uq, uc), std::min(oc, om));
        const double hi_m = std::max(std::max(uq, uc), std::max(oc, om));

        a.w_plus[k] = wp;
        a.w_minus[k] = wm;
        a.l_plus[k] = limit(uc, d_plus, lo_p, hi_p);
        a.l_minus[k] = limit(uc, d_minus, lo_m, hi_m);
    }
}

double l1_diff(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::abs(a[k] - b[k]);
    return s;
}

double sum(const double* a, std::size_t n)
{
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k];
    return s;
}

void min_max(const double* a, std::size_t n, double* lo, double* hi)
{
    double mn = a[0];
    double mx = a[0];
    for (std::size_t k = 1; k < n; ++k) {
        mn = std::min(mn, a[k]);
        mx = std::max(mx, a[k]);
    }
    *lo = mn;
    *hi = mx;
}

} // namespace

const KernelTable& scalar_table() noexcept
{
    static const KernelTable table{split_velocity, edge_flux, conservative_update, fromm_faces,
                                   weno_limiter,   l1_diff,   sum,                 min_max};
    return table;
}

} // namespace sorptran::simd::detail
