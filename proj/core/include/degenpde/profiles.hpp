#pragma once

#include <optional>

#include "degenpde/params.hpp"

namespace degenpde {

enum class ProfileKind { zkb, exponential, fast };

const char* to_string(ProfileKind k);

/// Self-similar radial profile f(xi):
///   zkb          (a - b xi^gamma1)_+^gamma2      slow diffusion, compact support
///   exponential  exp(-b xi^gamma1)               critical diffusion
///   fast         A (a + xi^gamma1)^gamma2         fast diffusion, gamma2 < 0
struct Profile {
    ProfileKind kind = ProfileKind::zkb;
    double a = 1.0;
    double b = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double A = 1.0;
    /// Support edge in xi; +inf unless kind == zkb.
    double xi_b = 0.0;
};

/// The profile matching the diffusion regime of `derived`, with amplitude a.
Profile make_profile(const DerivedConstants& derived, double a);
Profile make_profile(const DerivedConstants& derived, ProfileKind kind, double a);

double profile_value(const Profile& profile, double xi);

/// z(t, r) = vbar(t) f(xi(t, r)) in v-variables.
double supersolution_z(const DerivedConstants& derived, double a, double t, double r);

/// u = v^(1/(1-q)).
double to_u(double v, double q);

/// 1/l7 - s/p + (a - b xi^gamma1)_+^(gamma2 (beta2 - 1)) / l7.
/// Non-positive on [0, xi_b] makes the ZKB profile a supersolution.
double closed_form_residual_bracket(const DerivedConstants& derived, double a, double xi);

/// The self-similar operator applied to the ZKB profile in closed form,
/// f(xi) times the bracket above.
double zkb_residual(const DerivedConstants& derived, double a, double xi);

/// s/p >= (a^(gamma2 (beta2 - 1)) + 1) / l7 with l7 > 0 and gamma2 > 0.
bool global_solvability_condition(const DerivedConstants& derived, double a);

/// Largest amplitude a for which global_solvability_condition holds, when the
/// condition is an upper bound on a. Empty otherwise.
std::optional<double> solvability_threshold(const DerivedConstants& derived);

/// Radius of the support of v+ at rescaled time tau.
double front_radius_theory(const DerivedConstants& derived, double a, double tau);

/// ((T + t) ln(T + t))^(-1/(beta_c - 1)) exp(-r^2 / t) with beta_c the
/// critical exponent in u-variables.
double absorption_asymptote(const DerivedConstants& derived, double T, double t, double r);

}  // namespace degenpde
