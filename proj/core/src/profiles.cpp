#include "degenpde/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "degenpde/errors.hpp"

namespace degenpde {

const char* to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::zkb: return "zkb";
        case ProfileKind::exponential: return "exponential";
        case ProfileKind::fast: return "fast";
    }
    return "?";
}

Profile make_profile(const DerivedConstants& d, double a) {
    switch (d.diffusion) {
        case Diffusion::slow: return make_profile(d, ProfileKind::zkb, a);
        case Diffusion::critical: return make_profile(d, ProfileKind::exponential, a);
        case Diffusion::fast: return make_profile(d, ProfileKind::fast, a);
    }
    return {};
}

Profile make_profile(const DerivedConstants& d, ProfileKind kind, double a) {
    if (!(a > 0.0)) throw DomainError("profile amplitude must be positive");
    Profile pf;
    pf.kind = kind;
    pf.a = a;
    pf.gamma1 = d.gamma1;
    pf.b = require(d.b, "b");
    pf.xi_b = std::numeric_limits<double>::infinity();
    switch (kind) {
        case ProfileKind::zkb:
            pf.gamma2 = require(d.gamma2, "gamma2");
            if (!(pf.gamma2 > 0.0) || !(pf.b > 0.0))
                throw DomainError("zkb profile needs slow diffusion (gamma2 > 0, b > 0)");
            pf.xi_b = std::pow(a / pf.b, 1.0 / pf.gamma1);
            break;
        case ProfileKind::exponential:
            if (d.diffusion != Diffusion::critical)
                throw DomainError("exponential profile needs critical diffusion");
            break;
        case ProfileKind::fast:
            pf.gamma2 = require(d.gamma2, "gamma2");
            pf.A = require(d.A, "A");
            if (!(pf.gamma2 < 0.0) || !(pf.A > 0.0))
                throw DomainError("fast profile needs fast diffusion with A > 0");
            break;
    }
    return pf;
}

double profile_value(const Profile& pf, double xi) {
    if (!(xi >= 0.0)) throw DomainError("profile needs xi >= 0");
    switch (pf.kind) {
        case ProfileKind::zkb: {
            const double base = pf.a - pf.b * std::pow(xi, pf.gamma1);
            return base > 0.0 ? std::pow(base, pf.gamma2) : 0.0;
        }
        case ProfileKind::exponential:
            return std::exp(-pf.b * std::pow(xi, pf.gamma1));
        case ProfileKind::fast:
            return pf.A * std::pow(pf.a + std::pow(xi, pf.gamma1), pf.gamma2);
    }
    return 0.0;
}

double supersolution_z(const DerivedConstants& d, double a, double t, double r) {
    const TimeFactors tf = time_factors(d, t);
    const double xi = similarity_coord(d, t, r);
    return tf.vbar * profile_value(make_profile(d, a), xi);
}

double to_u(double v, double q) { return v > 0.0 ? std::pow(v, 1.0 / (1.0 - q)) : 0.0; }

double closed_form_residual_bracket(const DerivedConstants& d, double a, double xi) {
    const double l7 = require(d.l7, "l7");
    const double s = require(d.s, "s");
    const double g2 = require(d.gamma2, "gamma2");
    const double b = require(d.b, "b");
    const double base = std::max(a - b * std::pow(xi, d.gamma1), 0.0);
    const double e = g2 * (d.beta2 - 1.0);
    const double tail = (base == 0.0 && e > 0.0) ? 0.0 : std::pow(base, e);
    return 1.0 / l7 - s / d.params.p + tail / l7;
}

double zkb_residual(const DerivedConstants& d, double a, double xi) {
    const double f = profile_value(make_profile(d, ProfileKind::zkb, a), xi);
    if (f == 0.0) return 0.0;
    return f * closed_form_residual_bracket(d, a, xi);
}

bool global_solvability_condition(const DerivedConstants& d, double a) {
    if (d.diffusion != Diffusion::slow || !d.gamma2 || !(*d.gamma2 > 0.0)) return false;
    if (!d.l7 || !(*d.l7 > 0.0) || !d.s) return false;
    const double lhs = *d.s / d.params.p;
    const double rhs = (std::pow(a, *d.gamma2 * (d.beta2 - 1.0)) + 1.0) / *d.l7;
    return lhs >= rhs;
}

std::optional<double> solvability_threshold(const DerivedConstants& d) {
    if (d.diffusion != Diffusion::slow || !d.gamma2 || !d.l7 || !d.s) return std::nullopt;
    const double l7 = *d.l7;
    const double e = *d.gamma2 * (d.beta2 - 1.0);
    if (!(l7 > 0.0) || !(e > 0.0)) return std::nullopt;
    const double slack = *d.s / d.params.p * l7 - 1.0;
    if (!(slack > 0.0)) return std::nullopt;
    return std::pow(slack, 1.0 / e);
}

double front_radius_theory(const DerivedConstants& d, double a, double tau) {
    const ProblemParams& pr = d.params;
    const double dens = pr.p - pr.n - pr.n1;
    if (!(tau > 0.0)) throw DomainError("front radius needs tau > 0");
    if (!(dens > 0.0)) throw DomainError("front radius needs p > n + n1");
    const double b = require(d.b, "b");
    if (!(b > 0.0) || !d.gamma2 || !(*d.gamma2 > 0.0))
        throw DomainError("front radius needs a compactly supported profile");
    const double inner = std::pow(a / b, pr.p - 1.0) * std::pow(dens / pr.p, pr.p) * tau;
    return std::pow(inner, 1.0 / dens);
}

double absorption_asymptote(const DerivedConstants& d, double T, double t, double r) {
    const double bc = require(d.beta_crit_u, "beta_crit_u");
    if (!(bc > 1.0)) throw DomainError("asymptote needs beta_c > 1");
    if (!(t > 0.0) || !(T + t > 1.0)) throw DomainError("asymptote needs t > 0 and T + t > 1");
    const double s = T + t;
    return std::pow(s * std::log(s), -1.0 / (bc - 1.0)) * std::exp(-r * r / t);
}

}  // namespace degenpde
