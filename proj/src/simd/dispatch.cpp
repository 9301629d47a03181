#include "kernels_impl.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace sorptran::simd {

namespace {

std::atomic<int> g_active{-1};

} // namespace

bool available(Backend b) noexcept
{
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(SORPTRAN_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Backend best_available() noexcept
{
    return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() noexcept
{
    int v = g_active.load(std::memory_order_relaxed);
    if (v < 0) {
        v = static_cast<int>(best_available());
        g_active.store(v, std::memory_order_relaxed);
    }
    return static_cast<Backend>(v);
}

void set_backend(Backend b)
{
    if (!available(b))
        throw std::invalid_argument("SIMD backend '" + std::string(backend_name(b)) + "' is not available on this CPU");
    g_active.store(static_cast<int>(b), std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) noexcept
{
    return b == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& kernels(Backend b)
{
#if defined(SORPTRAN_HAVE_AVX2)
    if (b == Backend::avx2 && available(b)) return detail::avx2_table();
#endif
    if (b != Backend::scalar) throw std::invalid_argument("SIMD backend not available");
    return detail::scalar_table();
}

} // namespace sorptran::simd
