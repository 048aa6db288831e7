#pragma once

#include <functional>
#include <optional>
#include <string_view>

namespace degenpde {

bool is_integer(double x) noexcept;

/// Real power x^y. Negative bases are accepted only for integer exponents.
std::optional<double> real_pow(double base, double exponent) noexcept;

/// real_pow that throws UndefinedConstantError naming `symbol`.
double checked_pow(double base, double exponent, std::string_view symbol);

/// sign(x)|x|^e, defined at 0 for e > 0.
double signed_pow(double x, double e) noexcept;

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite sign (or one zero).
/// Stops at 200 iterations or when the bracket no longer shrinks.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi);

/// Positive root of f on (0, hi]: hi starts at `start` and is doubled until a
/// sign change with f near 0+ appears, up to `hi_max`.
RootResult positive_root(const std::function<double(double)>& f, double start = 1.0,
                         double hi_max = 1e6);

}  // namespace degenpde
