#include "degenpde/numeric.hpp"

#include <cmath>
#include <string>

#include "degenpde/errors.hpp"

namespace degenpde {

bool is_integer(double x) noexcept { return std::isfinite(x) && std::floor(x) == x; }

std::optional<double> real_pow(double base, double exponent) noexcept {
    if (base < 0.0 && !is_integer(exponent)) return std::nullopt;
    if (base == 0.0 && exponent < 0.0) return std::nullopt;
    return std::pow(base, exponent);
}

double checked_pow(double base, double exponent, std::string_view symbol) {
    if (auto v = real_pow(base, exponent)) return *v;
    throw UndefinedConstantError(std::string(symbol),
                                 "power " + std::to_string(base) + "^" + std::to_string(exponent) +
                                     " has no real value");
}

double signed_pow(double x, double e) noexcept {
    return std::copysign(std::pow(std::fabs(x), e), x);
}

RootResult bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if (std::signbit(flo) == std::signbit(fhi))
        throw RootNotFoundError("bisection bracket has no sign change");

    RootResult out;
    for (out.iterations = 1; out.iterations <= 200; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return {mid, 0.0, out.iterations};
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if (std::fabs(flo) <= std::fabs(fhi)) {
        out.root = lo;
        out.residual = flo;
    } else {
        out.root = hi;
        out.residual = fhi;
    }
    return out;
}

RootResult positive_root(const std::function<double(double)>& f, double start, double hi_max) {
    // Sample a small left end so that singular terms like w^(-1/2) are finite.
    double lo = 1e-300;
    for (double probe = 1e-12; probe > 1e-300; probe *= 1e-4) {
        if (std::isfinite(f(probe))) {
            lo = probe;
            break;
        }
    }
    const double flo = f(lo);
    for (double hi = start; hi <= hi_max; hi *= 2.0) {
        const double fhi = f(hi);
        if (std::isfinite(fhi) && (fhi == 0.0 || std::signbit(fhi) != std::signbit(flo)))
            return bisect(f, lo, hi);
    }
    throw RootNotFoundError("no sign change found on (0, " + std::to_string(hi_max) + "]");
}

}  // namespace degenpde
