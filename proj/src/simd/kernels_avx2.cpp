// AVX2 variants. Operation order mirrors kernels_scalar.cpp exactly; note that
// std::min(a, b) corresponds to _mm256_min_pd(b, a) and std::max(a, b) to
// _mm256_max_pd(b, a).

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace sorptran::simd::detail {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d x)
{
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void split_velocity(const double* v, double* vp, double* vm, std::size_t n)
{
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) {
        const __m256d x = _mm256_loadu_pd(v + k);
        _mm256_storeu_pd(vp + k, _mm256_max_pd(x, zero));
        _mm256_storeu_pd(vm + k, _mm256_min_pd(x, zero));
    }
    for (; k < n; ++k) {
        vp[k] = std::max(0.0, v[k]);
        vm[k] = std::min(0.0, v[k]);
    }
}

void edge_flux(const double* vp, const double* vm, const double* ul, const double* ur, double* flux,
               std::size_t n)
{
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) {
        const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(vp + k), _mm256_loadu_pd(ul + k));
        const __m256d b = _mm256_mul_pd(_mm256_loadu_pd(vm + k), _mm256_loadu_pd(ur + k));
        _mm256_storeu_pd(flux + k, _mm256_add_pd(a, b));
    }
    for (; k < n; ++k) flux[k] = vp[k] * ul[k] + vm[k] * ur[k];
}

void conservative_update(const double* q, const double* flux, double r, double* out, std::size_t n)
{
    const __m256d rv = _mm256_set1_pd(r);
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(flux + k + 1), _mm256_loadu_pd(flux + k));
        _mm256_storeu_pd(out + k, _mm256_sub_pd(_mm256_loadu_pd(q + k), _mm256_mul_pd(rv, diff)));
    }
    for (; k < n; ++k) out[k] = q[k] - r * (flux[k + 1] - flux[k]);
}

void fromm_faces(const double* u, double* ul, double* ur, std::size_t n)
{
    const __m256d quarter = _mm256_set1_pd(0.25);
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) {
        const double* c = u + k;
        const __m256d um = _mm256_loadu_pd(c - 1);
        const __m256d u0 = _mm256_loadu_pd(c);
        const __m256d u1 = _mm256_loadu_pd(c + 1);
        const __m256d u2 = _mm256_loadu_pd(c + 2);
        _mm256_storeu_pd(ul + k, _mm256_add_pd(u0, _mm256_mul_pd(quarter, _mm256_sub_pd(u1, um))));
        _mm256_storeu_pd(ur + k, _mm256_sub_pd(u1, _mm256_mul_pd(quarter, _mm256_sub_pd(u2, u0))));
    }
    for (; k < n; ++k) {
        const double* c = u + k;
        ul[k] = c[0] + 0.25 * (c[1] - c[-1]);
        ur[k] = c[1] - 0.25 * (c[2] - c[0]);
    }
}

inline __m256d limit(__m256d c, __m256d d, __m256d lo, __m256d hi)
{
    const __m256d positive = _mm256_cmp_pd(d, _mm256_setzero_pd(), _CMP_GT_OQ);
    const __m256d num = _mm256_blendv_pd(_mm256_sub_pd(hi, c), _mm256_sub_pd(c, lo), positive);
    const __m256d den = abs_pd(d);
    const __m256d twice = _mm256_mul_pd(_mm256_set1_pd(2.0), num);
    const __m256d inside = _mm256_cmp_pd(twice, den, _CMP_LT_OQ);
    return _mm256_blendv_pd(_mm256_set1_pd(1.0), _mm256_div_pd(twice, den), inside);
}

inline double limit_scalar(double c, double d, double lo, double hi)
{
    const double num = d > 0.0 ? c - lo : hi - c;
    const double den = std::abs(d);
    const double twice = 2.0 * num;
    return twice < den ? twice / den : 1.0;
}

void weno_limiter_tail(const LimiterArgs& a, std::size_t k)
{
    const std::ptrdiff_t s = a.stride;
    for (; k < a.n; ++k) {
        const double* up = a.u_pred + static_cast<std::ptrdiff_t>(k);
        const double* uo = a.u_old + static_cast<std::ptrdiff_t>(k);
        const double um = up[-s], uc = up[0], uq = up[s];
        const double om = uo[-s], oc = uo[0], oq = uo[s];
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
        const double d_minus = wm * (uq - oc) + (1.0 - wm) * (uc - om);
        a.w_plus[k] = wp;
        a.w_minus[k] = wm;
        a.l_plus[k] = limit_scalar(uc, d_plus, std::min(std::min(um, uc), std::min(oc, oq)),
                                   std::max(std::max(um, uc), std::max(oc, oq)));
        a.l_minus[k] = limit_scalar(uc, d_minus, std::min(std::min(uq, uc), std::min(oc, om)),
                                    std::max(std::max(uq, uc), std::max(oc, om)));
    }
}

void weno_limiter(const LimiterArgs& a)
{
    const std::ptrdiff_t s = a.stride;
    const __m256d eps = _mm256_set1_pd(a.eps);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + kLanes <= a.n; k += kLanes) {
        const double* up = a.u_pred + static_cast<std::ptrdiff_t>(k);
        const double* uo = a.u_old + static_cast<std::ptrdiff_t>(k);
        const __m256d um = _mm256_loadu_pd(up - s);
        const __m256d uc = _mm256_loadu_pd(up);
        const __m256d uq = _mm256_loadu_pd(up + s);
        const __m256d om = _mm256_loadu_pd(uo - s);
        const __m256d oc = _mm256_loadu_pd(uo);
        const __m256d oq = _mm256_loadu_pd(uo + s);

        const __m256d dm = _mm256_sub_pd(uc, um);
        const __m256d dp = _mm256_sub_pd(uq, uc);
        const __m256d bm = _mm256_add_pd(_mm256_mul_pd(dm, dm), eps);
        const __m256d bp = _mm256_add_pd(_mm256_mul_pd(dp, dp), eps);
        const __m256d bm2 = _mm256_mul_pd(bm, bm);
        const __m256d bp2 = _mm256_mul_pd(bp, bp);
        const __m256d den = _mm256_add_pd(bm2, bp2);
        const __m256d wp = _mm256_div_pd(bp2, den);
        const __m256d wm = _mm256_div_pd(bm2, den);

        const __m256d d_plus = _mm256_add_pd(_mm256_mul_pd(wp, _mm256_sub_pd(um, oc)),
                                             _mm256_mul_pd(_mm256_sub_pd(one, wp), _mm256_sub_pd(uc, oq)));
        const __m256d lo_p = _mm256_min_pd(_mm256_min_pd(oq, oc), _mm256_min_pd(uc, um));
        const __m256d hi_p = _mm256_max_pd(_mm256_max_pd(oq, oc), _mm256_max_pd(uc, um));

        const __m256d d_minus = _mm256_add_pd(_mm256_mul_pd(wm, _mm256_sub_pd(uq, oc)),
                                              _mm256_mul_pd(_mm256_sub_pd(one, wm), _mm256_sub_pd(uc, om)));
        const __m256d lo_m = _mm256_min_pd(_mm256_min_pd(om, oc), _mm256_min_pd(uc, uq));
        const __m256d hi_m = _mm256_max_pd(_mm256_max_pd(om, oc), _mm256_max_pd(uc, uq));

        _mm256_storeu_pd(a.w_plus + k, wp);
        _mm256_storeu_pd(a.w_minus + k, wm);
        _mm256_storeu_pd(a.l_plus + k, limit(uc, d_plus, lo_p, hi_p));
        _mm256_storeu_pd(a.l_minus + k, limit(uc, d_minus, lo_m, hi_m));
    }
    weno_limiter_tail(a, k);
}

double l1_diff(const double* a, const double* b, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes)
        acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k))));
    double s = hsum(acc);
    for (; k < n; ++k) s += std::abs(a[k] - b[k]);
    return s;
}

double sum(const double* a, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + kLanes <= n; k += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + k));
    double s = hsum(acc);
    for (; k < n; ++k) s += a[k];
    return s;
}

void min_max(const double* a, std::size_t n, double* lo, double* hi)
{
    double mn = a[0];
    double mx = a[0];
    std::size_t k = 0;
    if (n >= kLanes) {
        __m256d vmn = _mm256_loadu_pd(a);
        __m256d vmx = vmn;
        for (k = kLanes; k + kLanes <= n; k += kLanes) {
            const __m256d x = _mm256_loadu_pd(a + k);
            vmn = _mm256_min_pd(x, vmn);
            vmx = _mm256_max_pd(x, vmx);
        }
        alignas(32) double bl[kLanes];
        alignas(32) double bh[kLanes];
        _mm256_store_pd(bl, vmn);
        _mm256_store_pd(bh, vmx);
        mn = bl[0];
        mx = bh[0];
        for (std::size_t l = 1; l < kLanes; ++l) {
            mn = std::min(mn, bl[l]);
            mx = std::max(mx, bh[l]);
        }
    } else {
        k = 1;
    }
    for (; k < n; ++k) {
        mn = std::min(mn, a[k]);
        mx = std::max(mx, a[k]);
    }
    *lo = mn;
    *hi = mx;
}

} // namespace

const KernelTable& avx2_table() noexcept
{
    static const KernelTable table{split_velocity, edge_flux, conservative_update, fromm_faces,
                                   weno_limiter,   l1_diff,   sum,                 min_max};
    return table;
}

} // namespace sorptran::simd::detail
