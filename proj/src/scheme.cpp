#include "sorptran/scheme.hpp"

#include "sorptran/errors.hpp"

#include <array>
#include <string>
#include <utility>

namespace sorptran {

namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 5> kNames{{
    {SchemeKind::explicit1, "explicit1"},
    {SchemeKind::explicit2, "explicit2"},
    {SchemeKind::implicit1, "implicit1"},
    {SchemeKind::compact2, "compact2"},
    {SchemeKind::hires_weno, "hires_weno"},
}};

} // namespace

std::string_view scheme_name(SchemeKind k) noexcept
{
    for (const auto& [kind, name] : kNames)
        if (kind == k) return name;
    return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept
{
    for (const auto& [kind, n] : kNames)
        if (n == name) return kind;
    return std::nullopt;
}

bool is_explicit(SchemeKind k) noexcept
{
    return k == SchemeKind::explicit1 || k == SchemeKind::explicit2;
}

void SchemeConfig::validate() const
{
    std::vector<std::string> bad;
    if (!(omega >= 0.0 && omega <= 1.0)) bad.emplace_back("scheme.omega must lie in [0, 1]");
    if (!(sweep_tol > 0.0)) bad.emplace_back("sweep.tol must be > 0");
    if (max_sweeps < 2) bad.emplace_back("sweep.max_sweeps must be >= 2");
    if (!(weno_eps > 0.0)) bad.emplace_back("scheme.weno_eps must be > 0");
    if (corrector_passes < 1) bad.emplace_back("scheme.corrector_passes must be >= 1");
    if (bound_bisections < 0) bad.emplace_back("scheme.bound_bisections must be >= 0");
    try {
        newton.validate();
    } catch (const ValidationError& e) {
        bad.insert(bad.end(), e.violations().begin(), e.violations().end());
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

void LimiterState::resize(std::size_t n)
{
    w_plus.assign(n, 0.0);
    w_minus.assign(n, 0.0);
    l_plus.assign(n, 0.0);
    l_minus.assign(n, 0.0);
}

} // namespace sorptran
