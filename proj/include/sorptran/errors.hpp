#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sorptran {

/// Argument outside the domain of a model function (e.g. negative concentration).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A nonlinear or fixed-point iteration failed to converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_iterate, double residual)
        : std::runtime_error(what), last_iterate_(last_iterate), residual_(residual) {}

    double last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    double last_iterate_;
    double residual_;
};

/// Input validation failure carrying every violation found, not just the first.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// File system failure, message includes the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sorptran
